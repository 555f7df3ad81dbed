"""Exceptions raised by the library."""


class ChiunError(Exception):
    """Base class for all library errors."""


class GroupTooLarge(ChiunError):
    """A group (or a scan over it) exceeds the configured enumeration cap."""


class SubgroupEnumTooLarge(ChiunError):
    """Subgroup enumeration was requested for a group above the subgroup cap."""


class IsoUndecided(ChiunError):
    """The isomorphism search ran out of its node budget."""


class InvalidPermutation(ChiunError, ValueError):
    """A permutation is not a bijection of the stated point set."""


class InvalidAction(ChiunError, ValueError):
    """Generator images do not extend to a group action or homomorphism."""


class SchemaError(ChiunError, ValueError):
    """An input document does not follow the expected layout."""
