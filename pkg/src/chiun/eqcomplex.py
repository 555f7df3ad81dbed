"""Equivariant cell complexes as graded G-sets of cells.

Only the cell sets matter for everything computed here, so attaching maps
are not stored.  A cell's setwise stabilizer is taken to fix it pointwise,
which is the usual equivariant CW condition; it cannot be checked from the
data and is the caller's responsibility.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .errors import GroupTooLarge, InvalidAction
from .groupring import RElement
from .gset import GSet, class_in_R, disjoint_union, induce, product_gset, trivial_gset
from .isoclass import ClassRegistry, default_registry
from .permgroup import (
    LIMITS,
    PermGroup,
    SubgroupClass,
    direct_product,
    subgroup_class_lookup,
    trivial_group,
)

__all__ = [
    "EquivariantCellComplex",
    "chi_un_complex",
    "fixed_subcomplex",
    "strata_chi",
    "chi_orb_direct",
    "product_complex",
    "induce_complex",
    "point_complex",
]


class EquivariantCellComplex:
    """Cells of each dimension as a G-set over one common group."""

    def __init__(self, group: PermGroup, layers: Mapping[int, GSet]):
        self.group = group
        clean: dict[int, GSet] = {}
        for k, X in sorted(layers.items()):
            if k < 0:
                raise InvalidAction("cell dimensions must be non-negative")
            if X.group is not group and (
                X.group.generators != group.generators or X.group.degree != group.degree
            ):
                raise InvalidAction(f"layer {k} is not a G-set over the complex's group")
            if X.points:
                clean[int(k)] = X
        self.layers = clean

    def __repr__(self) -> str:
        dims = {k: X.points for k, X in self.layers.items()}
        return f"<EquivariantCellComplex over {self.group!r}: {dims}>"

    @property
    def dimension(self) -> int:
        return max(self.layers, default=-1)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * X.points for k, X in self.layers.items())

    def quotient_euler(self) -> int:
        """``chi(X/G)``: alternating count of cell orbits."""
        return sum((-1) ** k * X.num_orbits for k, X in self.layers.items())

    def sub(self, keep: Mapping[int, list[int]]) -> "EquivariantCellComplex":
        """The invariant subcomplex keeping the listed cells of each layer."""
        return EquivariantCellComplex(
            self.group, {k: self.layers[k].restrict(cells) for k, cells in keep.items() if k in self.layers}
        )

    def complement(self, keep: Mapping[int, list[int]]) -> "EquivariantCellComplex":
        out = {}
        for k, X in self.layers.items():
            drop = set(keep.get(k, ()))
            out[k] = X.restrict([p for p in range(X.points) if p not in drop])
        return EquivariantCellComplex(self.group, out)


def point_complex(G: PermGroup) -> EquivariantCellComplex:
    """A single 0-cell fixed by all of ``G``."""
    return EquivariantCellComplex(G, {0: trivial_gset(G, 1)})


def chi_un_complex(X: EquivariantCellComplex, registry: ClassRegistry | None = None) -> RElement:
    """``sum_k (-1)^k [Sigma_k, G]``."""
    reg = registry or default_registry()
    total = RElement()
    for k, layer in X.layers.items():
        c = class_in_R(layer, reg)
        total = total + (c if k % 2 == 0 else -c)
    return total


def fixed_subcomplex(
    X: EquivariantCellComplex, H: PermGroup
) -> tuple[EquivariantCellComplex, int]:
    """Cells fixed by the subgroup ``H`` (a complex over the trivial group) and ``chi(X^H)``."""
    G = X.group
    hidx = G.indices(np.array(H.generators, dtype=np.int64).reshape(len(H.generators), G.degree))
    if np.any(hidx < 0):
        raise InvalidAction("H is not a subgroup of the complex's group")
    one = trivial_group()
    layers = {}
    chi = 0
    for k, layer in X.layers.items():
        fixed = np.all(layer.rho[hidx] == np.arange(layer.points), axis=0)
        count = int(np.count_nonzero(fixed))
        layers[k] = trivial_gset(one, count)
        chi += (-1) ** k * count
    return EquivariantCellComplex(one, layers), chi


@dataclass(frozen=True)
class StratumEntry:
    """``chi(X^([H]) / G)`` for one conjugacy class ``[H]`` of subgroups."""

    position: int
    subgroup: SubgroupClass
    chi: int


def strata_chi(X: EquivariantCellComplex) -> list[StratumEntry]:
    """Non-zero orbit counts per stabilizer conjugacy class, by class position."""
    classes, lookup = subgroup_class_lookup(X.group)
    acc: dict[int, int] = {}
    for k, layer in X.layers.items():
        for p in layer.orbit_representatives():
            mask = layer.stabilizer_mask(p)
            pos = lookup[np.packbits(mask).tobytes()]
            acc[pos] = acc.get(pos, 0) + (-1) ** k
    return [StratumEntry(pos, classes[pos], chi) for pos, chi in sorted(acc.items()) if chi]


def strata_to_R(entries: list[StratumEntry], registry: ClassRegistry | None = None) -> RElement:
    """Reassemble ``sum_[H] chi(X^([H])/G) T^H``."""
    reg = registry or default_registry()
    return RElement([(reg.classify(e.subgroup.group), e.chi) for e in entries])


def chi_orb_direct(X: EquivariantCellComplex) -> Fraction:
    """``(1/|G|) sum over commuting pairs (g, h) of chi(X^<g,h>)``."""
    G = X.group
    n = G.order
    if n * n > LIMITS.hom_scan_cap:
        raise GroupTooLarge(f"pair scan over a group of order {n} is too large")
    comm = G.commute_matrix.astype(np.int64)
    total = 0
    for k, layer in X.layers.items():
        fixed = (layer.rho == np.arange(layer.points)).astype(np.int64)  # (|G|, cells)
        # sum_{g,h commuting} #cells fixed by g and h
        total += (-1) ** k * int(np.sum((comm @ fixed) * fixed))
    return Fraction(total, n)


def product_complex(X: EquivariantCellComplex, Y: EquivariantCellComplex) -> EquivariantCellComplex:
    """Cells are pairs of cells; dimensions add; the group is ``G x H``."""
    graded: dict[int, GSet] = {}
    for i, A in X.layers.items():
        for j, B in Y.layers.items():
            P = product_gset(A, B)
            graded[i + j] = disjoint_union(graded[i + j], P) if i + j in graded else P
    if not graded:
        return EquivariantCellComplex(direct_product(X.group, Y.group), {})
    group = next(iter(graded.values())).group
    layers = {k: GSet(group, L.points, L.action) for k, L in graded.items()}
    return EquivariantCellComplex(group, layers)


def induce_complex(X: EquivariantCellComplex, H: PermGroup, embedding=None) -> EquivariantCellComplex:
    """Layerwise induction along an embedding of the complex's group into ``H``."""
    return EquivariantCellComplex(H, {k: induce(L, H, embedding) for k, L in X.layers.items()})
