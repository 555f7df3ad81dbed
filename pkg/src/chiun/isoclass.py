"""Isomorphism testing, interned isomorphism classes and Krull-Schmidt splitting.

Classes are keyed by the sorted multiset of their indecomposable factors,
so multiplying classes never has to build the product group: the key of
``[G x H]`` is the union of the two keys.
"""
from __future__ import annotations

import math
import threading
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import GroupTooLarge, IsoUndecided
from .permgroup import (
    LIMITS,
    PermGroup,
    _small_generating_set,
    cyclic_group,
    dihedral_group,
    direct_product,
    quaternion8_group,
    symmetric_group,
    wreath_symmetric,
)

__all__ = [
    "Fingerprint",
    "GroupClassId",
    "ClassRegistry",
    "default_registry",
    "set_default_registry",
    "fingerprint",
    "find_isomorphism",
    "are_isomorphic",
    "normal_subgroups",
    "direct_factors",
    "classify",
    "decompose_indecomposable",
]

Multiset = tuple  # tuple of (value, count) pairs, sorted


def _ms(counter: Counter) -> Multiset:
    return tuple(sorted(counter.items()))


def _convolve(a: Multiset, b: Multiset, op) -> Multiset:
    out: Counter = Counter()
    for x, m in a:
        for y, n in b:
            out[op(x, y)] += m * n
    return _ms(out)


@dataclass(frozen=True)
class Fingerprint:
    """Isomorphism invariants; equal for isomorphic groups.

    Multisets are stored as sorted ``(value, multiplicity)`` pairs.
    ``profile`` counts elements by (order, class size, number of square
    roots), which separates many same-order groups the coarse fields miss.
    """

    order: int
    abelian: bool
    element_orders: Multiset
    class_sizes: Multiset
    center_order: int
    derived_order: int
    exponent: int
    profile: Multiset

    def __mul__(self, other: "Fingerprint") -> "Fingerprint":
        """Fingerprint of the direct product, computed from the factors."""
        return Fingerprint(
            order=self.order * other.order,
            abelian=self.abelian and other.abelian,
            element_orders=_convolve(self.element_orders, other.element_orders, math.lcm),
            class_sizes=_convolve(self.class_sizes, other.class_sizes, lambda x, y: x * y),
            center_order=self.center_order * other.center_order,
            derived_order=self.derived_order * other.derived_order,
            exponent=math.lcm(self.exponent, other.exponent),
            profile=_convolve(
                self.profile,
                other.profile,
                lambda x, y: (math.lcm(x[0], y[0]), x[1] * y[1], x[2] * y[2]),
            ),
        )


TRIVIAL_FINGERPRINT = Fingerprint(1, True, ((1, 1),), ((1, 1),), 1, 1, 1, (((1, 1, 1), 1),))


def fingerprint(G: PermGroup) -> Fingerprint:
    orders = G.element_orders
    sizes = G.class_sizes
    sqrts = G.sqrt_counts
    per_class = np.bincount(G.conjugacy_labels)
    profile = Counter(zip(orders.tolist(), sizes.tolist(), sqrts.tolist()))
    return Fingerprint(
        order=G.order,
        abelian=G.is_abelian,
        element_orders=_ms(Counter(orders.tolist())),
        class_sizes=_ms(Counter(per_class.tolist())),
        center_order=int((sizes == 1).sum()),
        derived_order=int(G.derived_mask.sum()),
        exponent=G.exponent,
        profile=_ms(profile),
    )


# ---------------------------------------------------------------------------
# isomorphism search
# ---------------------------------------------------------------------------


def _element_profile(G: PermGroup) -> np.ndarray:
    return np.stack([G.element_orders, G.class_sizes, G.sqrt_counts], axis=1)


def find_isomorphism(
    G: PermGroup, H: PermGroup, budget: int | None = None
) -> dict[tuple[int, ...], tuple[int, ...]] | None:
    """An isomorphism ``G -> H`` as a map on generators, or None.

    The returned dict sends each chosen generator of ``G`` (a permutation)
    to its image in ``H``; the map has been checked to be multiplicative on
    every pair of elements of ``G``.
    """
    phi = _find_iso_indices(G, H, budget)
    if phi is None:
        return None
    gens = _small_generating_set(G, np.arange(G.order))
    return {G.element(g): H.element(int(phi[g])) for g in gens}


def are_isomorphic(G: PermGroup, H: PermGroup, budget: int | None = None) -> bool:
    return _find_iso_indices(G, H, budget) is not None


def _find_iso_indices(G: PermGroup, H: PermGroup, budget: int | None = None) -> np.ndarray | None:
    if G.order != H.order:
        return None
    if G.order == 1:
        return np.zeros(1, dtype=np.int64)
    if G.degree == H.degree and G.element_key == H.element_key:
        return np.arange(G.order, dtype=np.int64)
    if fingerprint(G) != fingerprint(H):
        return None
    budget = LIMITS.iso_budget if budget is None else budget

    gens = _small_generating_set(G, np.arange(G.order))
    pg, ph = _element_profile(G), _element_profile(H)
    candidates = []
    for k, g in enumerate(gens):
        match = np.flatnonzero(np.all(ph == pg[g], axis=1))
        if k == 0:
            # conjugating by H we may fix the first image up to H-conjugacy
            labels = H.conjugacy_labels[match]
            _, first = np.unique(labels, return_index=True)
            match = match[np.sort(first)]
        candidates.append(match)

    tg, th = G.table, H.table
    gens_arr = np.array(gens, dtype=np.int64)
    nodes = 0
    chosen = np.zeros(len(gens), dtype=np.int64)

    def search(depth: int):
        nonlocal nodes
        for h in candidates[depth]:
            nodes += 1
            if nodes > budget:
                raise IsoUndecided(
                    f"isomorphism search between groups of order {G.order} exceeded {budget} nodes"
                )
            chosen[depth] = h
            phi = _kernels.extend_hom(tg, th, 0, 0, gens_arr[: depth + 1], chosen[: depth + 1], True)
            if phi is None:
                continue
            if depth + 1 == len(gens):
                if np.all(phi >= 0):
                    return phi
                continue
            found = search(depth + 1)
            if found is not None:
                return found
        return None

    phi = search(0)
    if phi is None:
        return None
    if not np.array_equal(phi[tg], th[np.ix_(phi, phi)]):  # pragma: no cover - kernel guarantees it
        raise AssertionError("extended map is not multiplicative")
    return phi


# ---------------------------------------------------------------------------
# normal subgroups and direct factors
# ---------------------------------------------------------------------------


def _key(mask: np.ndarray) -> bytes:
    return np.packbits(mask).tobytes()


def normal_subgroups(G: PermGroup) -> list[np.ndarray]:
    """Element masks of all normal subgroups, sorted by order then content.

    Every normal subgroup is a join of normal closures of conjugacy
    classes, so the lattice generated by those closures is complete.
    The join of two normal subgroups is their product set, built one
    right coset at a time.
    """
    labels = G.conjugacy_labels
    table = G.table
    trivial = G.closure([])
    found: dict[bytes, np.ndarray] = {_key(trivial): trivial}
    atoms: list[np.ndarray] = []
    for c in range(G.num_classes):
        m = G.normal_closure(np.flatnonzero(labels == c)[:1])
        if _key(m) not in found:
            found[_key(m)] = m
            atoms.append(m)
    frontier = list(atoms)
    while frontier:
        fresh = []
        for A in frontier:
            a_idx = np.flatnonzero(A)
            for B in atoms:
                J = A.copy()
                for b in np.flatnonzero(B & ~A):
                    if not J[b]:
                        J[table[a_idx, b]] = True
                if J.sum() == a_idx.size:
                    continue
                k = _key(J)
                if k not in found:
                    found[k] = J
                    fresh.append(J)
        frontier = fresh
    return sorted(found.values(), key=lambda m: (int(m.sum()), tuple(np.flatnonzero(m))))


def _abelian_invariants(G: PermGroup) -> list[int]:
    """Prime-power orders of the cyclic factors of an abelian group."""
    orders = G.element_orders
    out: list[int] = []
    for p in _prime_divisors(G.order):
        ppart = _is_p_power(orders, p)
        # s[k] = log_p #{x : x^(p^k) = 1}; factors of order >= p^k number s[k] - s[k-1]
        s = [0]
        pk = 1
        while s[-1] == 0 or s[-1] != s[-2]:
            pk *= p
            count = int(np.count_nonzero(ppart & (pk % orders == 0)))
            s.append(round(math.log(count, p)))
        at_least = [s[k] - s[k - 1] for k in range(1, len(s))]
        for k in range(len(at_least) - 1):
            out.extend([p ** (k + 1)] * (at_least[k] - at_least[k + 1]))
    return sorted(out)


def _prime_divisors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _is_p_power(orders: np.ndarray, p: int) -> np.ndarray:
    x = orders.copy()
    while True:
        div = (x % p == 0) & (x > 1)
        if not div.any():
            break
        x = np.where(div, x // p, x)
    return x == 1


def direct_factors(G: PermGroup) -> list[PermGroup]:
    """Indecomposable direct factors of ``G`` (each a standalone group).

    Abelian groups split into cyclic groups of prime-power order read off
    the element orders; otherwise we search the normal-subgroup lattice for
    a commuting pair ``N1, N2`` with trivial intersection and
    ``|N1||N2| = |G|``, taking ``N1`` as small as possible so that it is
    itself indecomposable, and recurse on ``N2``.
    """
    if G.order == 1:
        return []
    if G.is_abelian:
        return [cyclic_group(q) for q in _abelian_invariants(G)]
    factors: list[PermGroup] = []
    current = G
    while True:
        split = _split_once(current)
        if split is None:
            factors.append(current.reduced())
            break
        small, rest = split
        factors.append(small.reduced())
        if rest.is_abelian:
            factors.extend(cyclic_group(q) for q in _abelian_invariants(rest))
            break
        current = rest
    return factors


def _split_once(G: PermGroup):
    n = G.order
    normals = normal_subgroups(G)
    sizes = [int(m.sum()) for m in normals]
    by_size: dict[int, list[np.ndarray]] = {}
    for m, s in zip(normals, sizes):
        by_size.setdefault(s, []).append(m)
    t = G.table
    for N1, s1 in zip(normals, sizes):
        if s1 == 1 or s1 == n or n % s1:
            continue
        for N2 in by_size.get(n // s1, []):
            if np.count_nonzero(N1 & N2) != 1:
                continue
            a, b = np.flatnonzero(N1), np.flatnonzero(N2)
            if np.array_equal(t[np.ix_(a, b)], t[np.ix_(b, a)].T):
                return G.subgroup_from_mask(N1), G.subgroup_from_mask(N2)
    return None


# ---------------------------------------------------------------------------
# classes and the registry
# ---------------------------------------------------------------------------


class GroupClassId:
    """An interned isomorphism class; the basis index of the group ring.

    Equality is identity of the class ordinal within its registry.  The
    name, fingerprint and representative live in the registry record.
    """

    __slots__ = ("id", "key", "order", "_registry")

    def __init__(self, id: int, key: tuple[int, ...], order: int, registry: "ClassRegistry"):
        self.id = id
        self.key = key
        self.order = order
        self._registry = registry

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupClassId)
            and self.id == other.id
            and self._registry is other._registry
        )

    def __hash__(self) -> int:
        return hash(("class", self.id))

    def __repr__(self) -> str:
        return f"GroupClassId({self.id}, {self.name!r}, order={self.order})"

    @property
    def name(self) -> str:
        return self._registry._names[self.id]

    @property
    def fingerprint(self) -> Fingerprint:
        return self._registry.fingerprint_of(self)

    @property
    def representative(self) -> PermGroup:
        return self._registry.representative(self)

    @property
    def is_trivial(self) -> bool:
        return not self.key

    @property
    def is_indecomposable(self) -> bool:
        return len(self.key) == 1

    def sort_key(self) -> tuple[int, int]:
        return self.order, self.id


@dataclass
class _Indecomposable:
    order: int
    fingerprint: Fingerprint | None
    group: PermGroup | None
    cls: GroupClassId | None = None

    @property
    def virtual(self) -> bool:
        return self.group is None

    @property
    def abelian(self) -> bool:
        return self.fingerprint is not None and self.fingerprint.abelian


def _builtin_name(H: PermGroup, fp: Fingerprint) -> str | None:
    """Name an indecomposable group after a matching builtin, if any."""
    n = fp.order
    if fp.abelian:
        return f"Z{n}"  # indecomposable abelian means cyclic of prime-power order
    candidates = []
    k, f = 3, 6
    while f <= min(n, 720):
        if f == n:
            candidates.append((f"S{k}", symmetric_group(k)))
        k += 1
        f *= k
    if n % 2 == 0 and n // 2 >= 3 and n <= 2000:
        candidates.append((f"D{n // 2}", dihedral_group(n // 2)))
    if n == 8:
        candidates.append(("Q8", quaternion8_group()))
    for name, B in candidates:
        if fingerprint(B) == fp and are_isomorphic(B, H):
            return name
    return None


def _wrap(name: str) -> str:
    return f"({name})" if " x " in name else name


class ClassRegistry:
    """Interns isomorphism classes of finite groups.

    Indecomposable groups are bucketed by fingerprint and compared by
    explicit isomorphism search; every other class is the multiset of its
    Krull-Schmidt factors.  All mutation happens under one re-entrant lock.
    """

    def __init__(self):
        self._lock = threading.RLock()
        self._indec: list[_Indecomposable] = []
        self._buckets: dict[Fingerprint, list[int]] = {}
        self._by_key: dict[tuple[int, ...], GroupClassId] = {}
        self._classes: list[GroupClassId] = []
        self._names: list[str] = []
        self._anonymous: list[bool] = []
        self._reps: dict[int, PermGroup] = {}
        self._fps: dict[int, Fingerprint] = {}
        self._by_elements: dict[tuple, GroupClassId] = {}
        self._wreath: dict[tuple[int, int], GroupClassId] = {}
        # per-registry caches owned by other modules, keyed by purpose
        self.memo: dict = {}
        self.trivial = self._class_for_key((), name_hint="1")
        self._reps[self.trivial.id] = PermGroup(1, [], name="1")
        self._fps[self.trivial.id] = TRIVIAL_FINGERPRINT

    def __len__(self) -> int:
        return len(self._classes)

    @property
    def classes(self) -> list[GroupClassId]:
        return list(self._classes)

    def by_id(self, ident: int) -> GroupClassId:
        return self._classes[ident]

    def lookup(self, order: int, ident: int) -> GroupClassId:
        """Resolve an anonymous ``(order, id)`` reference."""
        if not 0 <= ident < len(self._classes) or self._classes[ident].order != order:
            raise KeyError(f"no class ({order},{ident}) in this registry")
        return self._classes[ident]

    # -- keys and names ---------------------------------------------------

    def _class_for_key(self, key: tuple[int, ...], name_hint: str | None = None) -> GroupClassId:
        """Class for a factor multiset; abelian classes are always named by factors."""
        with self._lock:
            cls = self._by_key.get(key)
            abelian = bool(key) and all(self._indec[i].abelian for i in key)
            if abelian:
                name_hint = " x ".join(f"Z{self._indec[i].order}" for i in key)
            if cls is None:
                order = math.prod(self._indec[i].order for i in key)
                cls = GroupClassId(len(self._classes), key, order, self)
                self._classes.append(cls)
                self._by_key[key] = cls
                if name_hint is not None:
                    name, anon = name_hint, False
                elif len(key) > 1 and all(not self._anonymous[self._indec[i].cls.id] for i in key):
                    name, anon = " x ".join(_wrap(self._indec[i].cls.name) for i in key), False
                else:
                    name, anon = f"({order},{cls.id})", True
                self._names.append(name)
                self._anonymous.append(anon)
            elif name_hint is not None and self._anonymous[cls.id]:
                self._names[cls.id] = name_hint
                self._anonymous[cls.id] = False
            return cls

    def _intern_indecomposable(self, H: PermGroup, name_hint: str | None = None) -> int:
        fp = fingerprint(H)
        with self._lock:
            bucket = self._buckets.setdefault(fp, [])
            for i in bucket:
                if are_isomorphic(self._indec[i].group, H):
                    if name_hint is not None:
                        self._class_for_key((i,), name_hint)
                    return i
            i = len(self._indec)
            self._indec.append(_Indecomposable(fp.order, fp, H))
            bucket.append(i)
            if name_hint is None:
                name_hint = _builtin_name(H, fp)
            cls = self._class_for_key((i,), name_hint)
            self._indec[i].cls = cls
            self._reps[cls.id] = H
            self._fps[cls.id] = fp
            return i

    # -- classification ---------------------------------------------------

    def classify(self, G: PermGroup, name: str | None = None) -> GroupClassId:
        """The class of ``G``; interns new indecomposable factors as needed."""
        hint = name if name is not None else G.name
        with self._lock:
            ek = G.element_key
            hit = self._by_elements.get(ek)
            if hit is not None:
                if hint is not None:
                    self._class_for_key(hit.key, hint)
                return hit
            factors = direct_factors(G)
            ids = []
            for F in factors:
                # a factor equal to G itself inherits G's name
                fhint = hint if len(factors) == 1 else None
                ids.append(self._intern_indecomposable(F, fhint))
            cls = self._class_for_key(tuple(sorted(ids)), hint)
            self._by_elements[ek] = cls
            self._reps.setdefault(cls.id, G)
            return cls

    def _check_realized(self, cls: GroupClassId) -> None:
        for i in cls.key:
            if self._indec[i].virtual:
                raise GroupTooLarge(
                    f"class {cls.name} contains a wreath product too large to realize"
                )

    def is_virtual(self, cls: GroupClassId) -> bool:
        return any(self._indec[i].virtual for i in cls.key)

    def factors(self, cls: GroupClassId) -> list[GroupClassId]:
        """Indecomposable factor classes, with multiplicity, by (order, id)."""
        self._check_realized(cls)
        out = [self._indec[i].cls for i in cls.key]
        return sorted(out, key=GroupClassId.sort_key)

    def product(self, a: GroupClassId, b: GroupClassId) -> GroupClassId:
        if a.is_trivial:
            return b
        if b.is_trivial:
            return a
        return self._class_for_key(tuple(sorted(a.key + b.key)))

    def power(self, a: GroupClassId, n: int) -> GroupClassId:
        return self._class_for_key(tuple(sorted(a.key * n)))

    def wreath(self, a: GroupClassId, n: int) -> GroupClassId:
        """The class of ``a wr S_n``."""
        if n == 1:
            return a
        with self._lock:
            hit = self._wreath.get((a.id, n))
            if hit is not None:
                return hit
            if a.is_trivial:
                hint = f"S{n}"
            elif self._anonymous[a.id]:
                hint = None
            else:
                hint = f"{_wrap(a.name)} wr S{n}"
            order = a.order**n * math.factorial(n)
            if LIMITS.virtual_wreath and (self.is_virtual(a) or order > LIMITS.table_cap):
                cls = self._virtual_wreath(a, n, order)
            else:
                W = wreath_symmetric(self.representative(a), n, name=hint)
                cls = self.classify(W)
            self._wreath[(a.id, n)] = cls
            return cls

    def _virtual_wreath(self, a: GroupClassId, n: int, order: int) -> GroupClassId:
        """An opaque atom standing for ``a wr S_n`` (see ``Limits.virtual_wreath``)."""
        i = len(self._indec)
        self._indec.append(_Indecomposable(order, None, None))
        cls = self._class_for_key((i,), f"{_wrap(a.name)} wr S{n}")
        self._indec[i].cls = cls
        return cls

    def fingerprint_of(self, cls: GroupClassId) -> Fingerprint:
        self._check_realized(cls)
        fp = self._fps.get(cls.id)
        if fp is None:
            fp = TRIVIAL_FINGERPRINT
            for i in cls.key:
                fp = fp * self._indec[i].fingerprint
            self._fps[cls.id] = fp
        return fp

    def representative(self, cls: GroupClassId) -> PermGroup:
        """A concrete group in the class (built from factors if needed)."""
        with self._lock:
            rep = self._reps.get(cls.id)
            if rep is None:
                self._check_realized(cls)
                rep = PermGroup(1, [])
                for i in cls.key:
                    rep = direct_product(rep, self._indec[i].group).reduced()
                rep.name = None if self._anonymous[cls.id] else cls.name
                self._reps[cls.id] = rep
            return rep

    def is_anonymous(self, cls: GroupClassId) -> bool:
        return self._anonymous[cls.id]


_default = ClassRegistry()
_default_lock = threading.Lock()


def default_registry() -> ClassRegistry:
    return _default


def set_default_registry(registry: ClassRegistry | None = None) -> ClassRegistry:
    """Swap in a fresh (or given) process-wide registry; returns it."""
    global _default
    with _default_lock:
        _default = registry if registry is not None else ClassRegistry()
        return _default


def classify(G: PermGroup, registry: ClassRegistry | None = None) -> GroupClassId:
    return (registry or default_registry()).classify(G)


def decompose_indecomposable(
    G: PermGroup, registry: ClassRegistry | None = None
) -> list[GroupClassId]:
    """Krull-Schmidt factors of ``G`` as classes, sorted by (order, id)."""
    reg = registry or default_registry()
    return reg.factors(reg.classify(G))
