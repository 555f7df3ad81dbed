"""Finite G-sets and their classes in the group ring."""
from __future__ import annotations

import itertools
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import GroupTooLarge, InvalidAction
from .groupring import RElement
from .isoclass import ClassRegistry, default_registry
from .permgroup import (
    LIMITS,
    Perm,
    PermGroup,
    check_perm,
    direct_product,
    wreath_symmetric,
)

__all__ = [
    "GSet",
    "orbits_and_stabilizers",
    "class_in_R",
    "induce",
    "embedding_map",
    "cartesian_power_gset",
    "remove_big_diagonal",
    "product_gset",
    "disjoint_union",
    "trivial_gset",
    "regular_gset",
    "natural_gset",
    "coset_gset",
]


class GSet:
    """A finite set ``{0..points-1}`` with a left action of ``group``.

    ``action[i]`` is the permutation of the points given to the i-th
    generator of ``group``.  Construction checks that this extends to an
    action of the whole group; ``rho[e]`` then holds the images of all
    points under element ``e``.
    """

    def __init__(self, group: PermGroup, points: int, action: Sequence[Sequence[int]]):
        self.group = group
        self.points = int(points)
        if len(action) != len(group.generators):
            raise InvalidAction(
                f"{len(action)} generator actions given for {len(group.generators)} generators"
            )
        try:
            self.action: tuple[Perm, ...] = tuple(check_perm(a, self.points) for a in action)
        except ValueError as exc:
            raise InvalidAction(str(exc)) from None
        acts = np.array(self.action, dtype=np.int64).reshape(len(self.action), self.points)
        rho = _kernels.extend_action(group.table, 0, group.generator_indices, acts)
        if rho is None:
            raise InvalidAction("generator images do not extend to an action of the group")
        rho.setflags(write=False)
        self.rho: np.ndarray = rho

    def __repr__(self) -> str:
        return f"<GSet: {self.points} points over {self.group!r}>"

    def __len__(self) -> int:
        return self.points

    def orbit_labels(self) -> np.ndarray:
        """Orbit index of every point; orbits numbered by their smallest point."""
        labels = np.full(self.points, -1, dtype=np.int64)
        k = 0
        for p in range(self.points):
            if labels[p] < 0:
                labels[np.unique(self.rho[:, p])] = k
                k += 1
        return labels

    @property
    def num_orbits(self) -> int:
        return int(self.orbit_labels().max()) + 1 if self.points else 0

    def orbit_representatives(self) -> list[int]:
        labels = self.orbit_labels()
        _, first = np.unique(labels, return_index=True)
        return sorted(int(i) for i in first)

    def stabilizer_mask(self, p: int) -> np.ndarray:
        return self.rho[:, p] == p

    def restrict(self, keep: Sequence[int]) -> "GSet":
        """The invariant subset ``keep`` (in the given order) as a G-set."""
        keep = list(keep)
        pos = {p: i for i, p in enumerate(keep)}
        try:
            action = [[pos[a[p]] for p in keep] for a in self.action]
        except KeyError:
            raise InvalidAction("subset is not invariant under the action") from None
        return GSet(self.group, len(keep), action)


def orbits_and_stabilizers(X: GSet) -> list[tuple[int, PermGroup]]:
    """One ``(orbit size, stabilizer)`` per orbit, in order of smallest point."""
    labels = X.orbit_labels()
    out = []
    for p in X.orbit_representatives():
        size = int(np.count_nonzero(labels == labels[p]))
        out.append((size, X.group.subgroup_from_mask(X.stabilizer_mask(p))))
    return out


def class_in_R(X: GSet, registry: ClassRegistry | None = None) -> RElement:
    """``sum over orbits of T^(stabilizer)``."""
    reg = registry or default_registry()
    terms = []
    for p in X.orbit_representatives():
        stab = X.group.subgroup_from_mask(X.stabilizer_mask(p))
        terms.append((reg.classify(stab), 1))
    return RElement(terms)


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def embedding_map(G: PermGroup, H: PermGroup, embedding=None) -> np.ndarray:
    """Element-index map of an injective homomorphism ``G -> H``.

    ``embedding`` is a list of images of G's generators (permutations of
    H's points), a dict from generator to image, or None for the inclusion
    of a subgroup acting on the same points.
    """
    if embedding is None:
        images = list(G.generators)
    elif isinstance(embedding, Mapping):
        images = [embedding[g] for g in G.generators]
    else:
        images = list(embedding)
    if len(images) != len(G.generators):
        raise InvalidAction("embedding must give one image per generator")
    if images and any(len(p) != H.degree for p in images):
        raise InvalidAction("embedding images have the wrong degree")
    idx = H.indices(np.array(images, dtype=np.int64).reshape(len(images), H.degree))
    if np.any(idx < 0):
        raise InvalidAction("embedding image is not an element of the target group")
    phi = _kernels.extend_hom(G.table, H.table, 0, 0, G.generator_indices, idx, True)
    if phi is None or np.any(phi < 0):
        raise InvalidAction("embedding is not an injective homomorphism")
    return phi


def induce(X: GSet, H: PermGroup, embedding=None) -> GSet:
    """``H x_G X``: points ``(coset i, x)`` indexed ``i * |X| + x``."""
    G = X.group
    phi = embedding_map(G, H, embedding)
    tH = H.table
    coset = np.full(H.order, -1, dtype=np.int64)
    gpart = np.full(H.order, -1, dtype=np.int64)
    reps = []
    for y in range(H.order):
        if coset[y] >= 0:
            continue
        members = tH[y, phi].astype(np.int64)  # y * phi(g) for g in G
        coset[members] = len(reps)
        gpart[members] = np.arange(G.order)
        reps.append(y)
    m = X.points
    actions = []
    for h in H.generator_indices:
        img = np.empty(len(reps) * m, dtype=np.int64)
        for i, r in enumerate(reps):
            y = tH[h, r]
            j, g = coset[y], gpart[y]
            img[i * m : (i + 1) * m] = j * m + X.rho[g]
        actions.append(img.tolist())
    return GSet(H, len(reps) * m, actions)


def _tuple_index(points: int, n: int) -> np.ndarray:
    return points ** np.arange(n - 1, -1, -1, dtype=np.int64)


def cartesian_power_gset(X: GSet, n: int) -> GSet:
    """``X^n`` under ``G wr S_n``; coordinate ``b`` lives in block ``b``.

    Tuples are indexed lexicographically.  Element ``(g_0..g_{n-1}; pi)``
    sends ``x`` to ``y`` with ``y[pi(b)] = g_b x[b]``.
    """
    G = X.group
    m = X.points
    if m**n > LIMITS.cap * 50:
        raise GroupTooLarge(f"{m}^{n} tuples exceed the point budget")
    W = wreath_symmetric(G, n)
    tuples = np.array(list(itertools.product(range(m), repeat=n)), dtype=np.int64).reshape(-1, n)
    weights = _tuple_index(m, n)
    actions = []
    for b in range(n):
        for act in X.action:
            y = tuples.copy()
            y[:, b] = np.asarray(act, dtype=np.int64)[tuples[:, b]]
            actions.append((y @ weights).tolist())
    block_perms = []
    if n >= 2:
        block_perms.append((1, 0) + tuple(range(2, n)))
    if n >= 3:
        block_perms.append(tuple((b + 1) % n for b in range(n)))
    for pi in block_perms:
        y = np.empty_like(tuples)
        y[:, list(pi)] = tuples
        actions.append((y @ weights).tolist())
    return GSet(W, len(tuples), actions)


def remove_big_diagonal(X: GSet, n: int) -> GSet:
    """Tuples of ``X^n`` whose coordinates lie in pairwise distinct G-orbits."""
    P = cartesian_power_gset(X, n)
    labels = X.orbit_labels()
    tuples = np.array(list(itertools.product(range(X.points), repeat=n)), dtype=np.int64).reshape(-1, n)
    orbit_tuples = labels[tuples]
    distinct = np.ones(len(tuples), dtype=np.bool_)
    for a in range(n):
        for b in range(a + 1, n):
            distinct &= orbit_tuples[:, a] != orbit_tuples[:, b]
    return P.restrict(np.flatnonzero(distinct).tolist())


def product_gset(X: GSet, Y: GSet) -> GSet:
    """``X x Y`` under ``G x H``; the pair ``(x, y)`` has index ``x * |Y| + y``."""
    GH = direct_product(X.group, Y.group)
    mx, my = X.points, Y.points
    xs = np.repeat(np.arange(mx), my)
    ys = np.tile(np.arange(my), mx)
    actions = []
    for a in X.action:
        actions.append((np.asarray(a, dtype=np.int64)[xs] * my + ys).tolist())
    for a in Y.action:
        actions.append((xs * my + np.asarray(a, dtype=np.int64)[ys]).tolist())
    return GSet(GH, mx * my, actions)


def disjoint_union(X: GSet, Y: GSet) -> GSet:
    if X.group.element_key != Y.group.element_key or X.group.generators != Y.group.generators:
        raise InvalidAction("disjoint union needs G-sets over the same group")
    off = X.points
    actions = [list(a) + [off + p for p in b] for a, b in zip(X.action, Y.action)]
    return GSet(X.group, X.points + Y.points, actions)


def trivial_gset(G: PermGroup, points: int) -> GSet:
    return GSet(G, points, [tuple(range(points))] * len(G.generators))


def regular_gset(G: PermGroup) -> GSet:
    """``G`` acting on its own elements by left multiplication."""
    t = G.table
    return GSet(G, G.order, [t[g].tolist() for g in G.generator_indices])


def natural_gset(G: PermGroup) -> GSet:
    """``G`` acting on the points it permutes."""
    return GSet(G, G.degree, list(G.generators))


def coset_gset(G: PermGroup, H: PermGroup) -> GSet:
    """``G/H`` for a subgroup ``H`` on the same points."""
    return induce(trivial_gset(H, 1), G)
