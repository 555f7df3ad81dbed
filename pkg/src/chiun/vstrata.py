"""Stratified V-manifolds, brute-force oracles for symmetric powers and
configuration spaces, and the Macdonald-identity verifiers.

A V-manifold is modelled by its isotropy stratification: a list of strata,
each with the compactly supported Euler characteristic of the stratum and
the isomorphism class of the isotropy group along it.  The oracles count
strata of ``S^n Q`` and of the unordered configuration space directly; the
only analytic input is that ``r`` distinct unordered points on a stratum of
Euler characteristic ``chi`` form a space of Euler characteristic
``binom(chi, r)`` (falling-factorial binomial, valid for negative ``chi``).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .groupring import RElement, format_relement
from .gset import GSet, cartesian_power_gset, class_in_R, remove_big_diagonal
from .isoclass import ClassRegistry, GroupClassId, default_registry
from .lambdaseries import (
    LambdaStructure,
    SeriesR,
    base_series,
    element_lambda_series,
    power,
)
from .permgroup import PermGroup

__all__ = [
    "VStrata",
    "binom",
    "chi_un_vmfd",
    "sym_power_oracle",
    "conf_oracle",
    "oracle_series",
    "MacdonaldReport",
    "verify_macdonald",
    "verify_macdonald_gset",
    "vstrata_from_gset",
]


def binom(x: int, r: int) -> int:
    """``x (x-1) ... (x-r+1) / r!`` for any integer ``x``."""
    if r < 0:
        return 0
    num = 1
    for i in range(r):
        num *= x - i
    return num // math.factorial(r)


class VStrata:
    """Strata ``(chi, isotropy class)``; repeated classes are merged by adding chi."""

    def __init__(self, strata: Iterable[tuple[int, GroupClassId | PermGroup]], registry: ClassRegistry | None = None):
        self.registry = registry or default_registry()
        merged: dict[GroupClassId, int] = {}
        for chi, g in strata:
            cls = g if isinstance(g, GroupClassId) else self.registry.classify(g)
            merged[cls] = merged.get(cls, 0) + int(chi)
        self.strata: tuple[tuple[int, GroupClassId], ...] = tuple(
            (chi, cls) for cls, chi in sorted(merged.items(), key=lambda kv: kv[0].sort_key())
        )

    def __repr__(self) -> str:
        inner = ", ".join(f"({chi}, {cls.name})" for chi, cls in self.strata)
        return f"VStrata([{inner}])"

    def __iter__(self):
        return iter(self.strata)

    def __len__(self) -> int:
        return len(self.strata)

    def disjoint_union(self, other: "VStrata") -> "VStrata":
        return VStrata(list(self.strata) + list(other.strata), self.registry)


def chi_un_vmfd(Q: VStrata) -> RElement:
    """``sum_j chi_j T^(G_j)``."""
    return RElement([(cls, chi) for chi, cls in Q.strata])


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``n`` as non-increasing tuples."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def _compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ``parts``-tuples of non-negative integers summing to ``n``."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def sym_power_oracle(Q: VStrata, n: int) -> RElement:
    """``chi^un(S^n Q)`` by stratifying the symmetric power by multiplicity data.

    A point of ``S^n Q`` puts ``r_j`` distinct points on stratum ``j`` with
    multiplicities given by a partition of ``n_j``; ``a_m`` of them have
    multiplicity ``m``.  That stratum has Euler characteristic
    ``binom(chi_j, r_j) * r_j! / prod a_m!`` and isotropy
    ``prod_m (G_j wr S_m)^(a_m)``.
    """
    reg = Q.registry
    total: list[tuple[GroupClassId, int]] = []
    strata = list(Q.strata)
    for split in _compositions(n, len(strata)):
        per_stratum: list[list[tuple[int, GroupClassId]]] = []
        for (chi, g), nj in zip(strata, split):
            options = []
            for part in _partitions(nj):
                counts: dict[int, int] = {}
                for m in part:
                    counts[m] = counts.get(m, 0) + 1
                r = len(part)
                coef = binom(chi, r) * math.factorial(r)
                for a in counts.values():
                    coef //= math.factorial(a)
                if coef == 0:
                    continue
                cls = reg.trivial
                for m, a in sorted(counts.items()):
                    cls = reg.product(cls, reg.power(reg.wreath(g, m), a))
                options.append((coef, cls))
            per_stratum.append(options)
        for combo in itertools.product(*per_stratum):
            coef = 1
            cls = reg.trivial
            for c, h in combo:
                coef *= c
                cls = reg.product(cls, h)
            total.append((cls, coef))
    return RElement(total)


def conf_oracle(Q: VStrata, n: int) -> RElement:
    """``chi^un`` of unordered ``n``-tuples of distinct points.

    Choosing ``r_j`` points on stratum ``j`` contributes
    ``prod_j binom(chi_j, r_j)`` with isotropy ``prod_j G_j^(r_j)``.
    """
    reg = Q.registry
    strata = list(Q.strata)
    total: list[tuple[GroupClassId, int]] = []
    for split in _compositions(n, len(strata)):
        coef = 1
        cls = reg.trivial
        for (chi, g), r in zip(strata, split):
            coef *= binom(chi, r)
            cls = reg.product(cls, reg.power(g, r))
        if coef:
            total.append((cls, coef))
    return RElement(total)


def oracle_series(Q: VStrata, mode: LambdaStructure | str, N: int) -> SeriesR:
    """``1 + sum_n oracle(Q, n) t^n``."""
    s = LambdaStructure.parse(mode)
    oracle = sym_power_oracle if s is LambdaStructure.SYMMETRIC else conf_oracle
    return SeriesR([RElement.one(Q.registry)] + [oracle(Q, n) for n in range(1, N + 1)])


@dataclass
class MacdonaldReport:
    """Per-degree comparison of the brute-force side with the two series paths."""

    mode: LambdaStructure
    N: int
    lhs: SeriesR
    rhs_lambda: SeriesR
    rhs_power: SeriesR
    mismatch: tuple[int, str, RElement, RElement] | None = field(default=None)

    @property
    def ok(self) -> bool:
        return self.mismatch is None

    def summary(self) -> str:
        if self.ok:
            return f"OK: degrees 1..{self.N} match"
        degree, which, left, right = self.mismatch
        return (
            f"MISMATCH at degree {degree} ({which}): "
            f"lhs = {format_relement(left)}; rhs = {format_relement(right)}"
        )

    def lines(self) -> list[str]:
        out = [self.summary()]
        for n in range(1, self.N + 1):
            out.append(f"t^{n}: {format_relement(self.lhs[n])}")
        return out


def _compare(mode, N, lhs: SeriesR, rhs_lambda: SeriesR, rhs_power: SeriesR) -> MacdonaldReport:
    mismatch = None
    for n in range(1, N + 1):
        if lhs[n] != rhs_lambda[n]:
            mismatch = (n, "lambda-series", lhs[n], rhs_lambda[n])
            break
        if lhs[n] != rhs_power[n]:
            mismatch = (n, "power structure", lhs[n], rhs_power[n])
            break
    return MacdonaldReport(mode, N, lhs, rhs_lambda, rhs_power, mismatch)


def verify_macdonald(Q: VStrata, mode: LambdaStructure | str, N: int) -> MacdonaldReport:
    """Oracle series against ``nu_(chi^un Q)`` and ``(nu_1)^(chi^un Q)``."""
    s = LambdaStructure.parse(mode)
    chi = chi_un_vmfd(Q)
    lhs = oracle_series(Q, s, N)
    rhs_lambda = element_lambda_series(chi, s, N, Q.registry)
    rhs_power = power(base_series(s, N, Q.registry), chi, s)
    return _compare(s, N, lhs, rhs_lambda, rhs_power)


def gset_series(X: GSet, mode: LambdaStructure | str, N: int, registry: ClassRegistry | None = None) -> SeriesR:
    """``1 + sum_n [X^n, G_n] t^n`` (or with the big diagonal removed), by orbit enumeration."""
    s = LambdaStructure.parse(mode)
    reg = registry or default_registry()
    build = cartesian_power_gset if s is LambdaStructure.SYMMETRIC else remove_big_diagonal
    return SeriesR([RElement.one(reg)] + [class_in_R(build(X, n), reg) for n in range(1, N + 1)])


def verify_macdonald_gset(X: GSet, mode: LambdaStructure | str, N: int,
                          registry: ClassRegistry | None = None) -> MacdonaldReport:
    """Brute-force wreath-product orbit data against the power structure."""
    s = LambdaStructure.parse(mode)
    reg = registry or default_registry()
    chi = class_in_R(X, reg)
    lhs = gset_series(X, s, N, reg)
    rhs_lambda = element_lambda_series(chi, s, N, reg)
    rhs_power = power(base_series(s, N, reg), chi, s)
    return _compare(s, N, lhs, rhs_lambda, rhs_power)


def vstrata_from_gset(X: GSet, registry: ClassRegistry | None = None) -> VStrata:
    """A finite G-set as a 0-dimensional V-manifold: one point stratum per orbit."""
    reg = registry or default_registry()
    return VStrata([(x, g) for g, x in class_in_R(X, reg).items()], reg)


def strata_from_pairs(pairs: Sequence[tuple[int, GroupClassId]], registry: ClassRegistry | None = None) -> VStrata:
    return VStrata(pairs, registry)
