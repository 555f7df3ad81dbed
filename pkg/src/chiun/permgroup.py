"""Finite groups realized as permutation groups.

Elements are stored as rows of an integer array, sorted lexicographically
by image tuple, so the identity is always element ``0``.  Everything that
needs group multiplication works on the multiplication table, which is
materialized lazily.
"""
from __future__ import annotations

import hashlib
import itertools
import math
import re
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import GroupTooLarge, InvalidPermutation, SchemaError, SubgroupEnumTooLarge

Perm = tuple[int, ...]

__all__ = [
    "Perm",
    "Limits",
    "LIMITS",
    "PermGroup",
    "GammaSpec",
    "SubgroupClass",
    "check_perm",
    "perm_from_cycles",
    "perm_to_cycles",
    "compose",
    "invert",
    "trivial_group",
    "cyclic_group",
    "symmetric_group",
    "dihedral_group",
    "klein4_group",
    "quaternion8_group",
    "group_from_spec",
    "parse_group_expr",
    "ExprParser",
    "GroupExprOps",
    "enumerate_elements",
    "direct_product",
    "wreath_symmetric",
    "subgroup_conjugacy_classes",
    "hom_count",
]


@dataclass
class Limits:
    """Process-wide size limits (the CLI ``--cap`` flag edits ``cap``)."""

    cap: int = 20_000
    subgroup_cap: int = 400
    table_cap: int = 5_000
    iso_budget: int = 200_000
    hom_scan_cap: int = 50_000_000
    # When set, wreath classes too large to realize become opaque atoms
    # keyed by (base class, n) instead of raising GroupTooLarge.  Equality
    # of elements built from such atoms still implies equality in R.
    virtual_wreath: bool = False


LIMITS = Limits()


# ---------------------------------------------------------------------------
# permutations
# ---------------------------------------------------------------------------


def check_perm(images: Iterable[int], degree: int | None = None) -> Perm:
    p = tuple(int(x) for x in images)
    if degree is not None and len(p) != degree:
        raise InvalidPermutation(f"expected {degree} images, got {len(p)}")
    if sorted(p) != list(range(len(p))):
        raise InvalidPermutation(f"{p} is not a bijection of 0..{len(p) - 1}")
    return p


def perm_from_cycles(cycles: Sequence[Sequence[int]], degree: int, one_based: bool = True) -> Perm:
    """Build a permutation from disjoint cycles, e.g. ``[[1, 2], [3, 4]]``."""
    shift = 1 if one_based else 0
    images = list(range(degree))
    seen: set[int] = set()
    for cycle in cycles:
        pts = [int(c) - shift for c in cycle]
        for p in pts:
            if not 0 <= p < degree:
                raise InvalidPermutation(f"point {p + shift} outside 1..{degree}")
            if p in seen:
                raise InvalidPermutation(f"point {p + shift} appears in two cycles")
            seen.add(p)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            images[a] = b
    return tuple(images)


def perm_to_cycles(p: Sequence[int], one_based: bool = True) -> list[list[int]]:
    shift = 1 if one_based else 0
    seen = set()
    cycles = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = []
        x = start
        while x not in seen:
            seen.add(x)
            cyc.append(x + shift)
            x = p[x]
        cycles.append(cyc)
    return cycles


def compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    """``p o q``: apply ``q`` first."""
    return tuple(p[i] for i in q)


def invert(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


# ---------------------------------------------------------------------------
# lazily computed, lock-protected attributes
# ---------------------------------------------------------------------------


class _lazy:
    """Compute-once attribute; safe when several threads race on first use."""

    def __init__(self, fn):
        self.fn = fn
        self.name = fn.__name__
        self.__doc__ = fn.__doc__

    def __get__(self, obj, cls=None):
        if obj is None:
            return self
        try:
            return obj.__dict__[self.name]
        except KeyError:
            pass
        with obj._lock:
            if self.name not in obj.__dict__:
                obj.__dict__[self.name] = self.fn(obj)
        return obj.__dict__[self.name]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _closure_elements(degree: int, generators: Sequence[Perm], cap: int) -> np.ndarray:
    ident = np.arange(degree, dtype=np.int32)
    if not generators:
        return ident[None, :]
    gens = np.array(generators, dtype=np.int32).reshape(len(generators), degree)
    seen = {ident.tobytes()}
    found = [ident]
    frontier = ident[None, :]
    while len(frontier):
        fresh = []
        for g in gens:
            # right multiplication x o g
            for row in frontier[:, g]:
                key = row.tobytes()
                if key not in seen:
                    seen.add(key)
                    fresh.append(row)
        if len(seen) > cap:
            raise GroupTooLarge(f"group closure exceeds the enumeration cap {cap}")
        found.extend(fresh)
        frontier = np.array(fresh, dtype=np.int32).reshape(len(fresh), degree)
    return np.unique(np.array(found, dtype=np.int32), axis=0)


class PermGroup:
    """A finite group given by generating permutations of ``0..degree-1``.

    ``elements`` is materialized on first use (closure of the generators,
    capped by ``LIMITS.cap``) and sorted lexicographically.
    """

    def __init__(
        self,
        degree: int,
        generators: Iterable[Sequence[int]] = (),
        *,
        name: str | None = None,
        elements: np.ndarray | None = None,
        cap: int | None = None,
    ):
        self.degree = int(degree)
        if self.degree < 0:
            raise InvalidPermutation("degree must be non-negative")
        self.generators: tuple[Perm, ...] = tuple(check_perm(g, self.degree) for g in generators)
        self.name = name
        self._cap = cap
        self._lock = threading.RLock()
        if elements is not None:
            el = np.asarray(elements, dtype=np.int32).reshape(-1, self.degree)
            self.__dict__["elements"] = _readonly(el)

    def __repr__(self) -> str:
        label = self.name or "PermGroup"
        if "elements" in self.__dict__:
            return f"<{label}: order {self.order}, degree {self.degree}>"
        return f"<{label}: degree {self.degree}, {len(self.generators)} generators>"

    # -- elements ----------------------------------------------------------

    @_lazy
    def elements(self) -> np.ndarray:
        cap = self._cap if self._cap is not None else LIMITS.cap
        return _readonly(_closure_elements(self.degree, self.generators, cap))

    @property
    def order(self) -> int:
        return int(self.elements.shape[0])

    def __len__(self) -> int:
        return self.order

    def element(self, i: int) -> Perm:
        return tuple(int(x) for x in self.elements[i])

    @_lazy
    def _lookup(self):
        # a base: points whose images determine an element uniquely
        el = self.elements.astype(np.int64)
        n, d = el.shape
        base = []
        alive = np.ones(n, dtype=np.bool_)
        for p in range(d):
            if alive.sum() <= 1:
                break
            col = el[:, p]
            if np.any(col[alive] != p):
                base.append(p)
                alive &= col == p
        radix = max(d, 1)
        if radix ** max(len(base), 1) >= 2**62:
            return None
        weights = radix ** np.arange(len(base), dtype=np.int64)
        keys = el[:, base] @ weights if base else np.zeros(n, dtype=np.int64)
        order = np.argsort(keys, kind="stable")
        return np.array(base, dtype=np.int64), weights, keys[order], order

    def indices(self, perms: np.ndarray) -> np.ndarray:
        """Element indices of the rows of ``perms``; ``-1`` for non-members."""
        perms = np.asarray(perms, dtype=np.int64).reshape(-1, self.degree)
        lookup = self._lookup
        if lookup is None:
            table = {row.tobytes(): i for i, row in enumerate(self.elements)}
            rows = perms.astype(np.int32)
            return np.array([table.get(r.tobytes(), -1) for r in rows], dtype=np.int64)
        base, weights, skeys, order = lookup
        keys = perms[:, base] @ weights if len(base) else np.zeros(len(perms), dtype=np.int64)
        pos = np.searchsorted(skeys, keys)
        pos = np.minimum(pos, len(skeys) - 1)
        idx = order[pos]
        good = (skeys[pos] == keys) & np.all(self.elements[idx] == perms, axis=1)
        return np.where(good, idx, -1)

    def index(self, perm: Sequence[int]) -> int:
        return int(self.indices(np.asarray(perm)[None, :])[0])

    def __contains__(self, perm) -> bool:
        return len(perm) == self.degree and self.index(perm) >= 0

    @_lazy
    def element_key(self) -> tuple[int, str]:
        """Hashable identity of the element set (not of the isomorphism class)."""
        digest = hashlib.blake2b(np.ascontiguousarray(self.elements).tobytes(), digest_size=16)
        return self.degree, digest.hexdigest()

    @_lazy
    def generator_indices(self) -> np.ndarray:
        if not self.generators:
            return np.empty(0, dtype=np.int64)
        return _readonly(self.indices(np.array(self.generators)))

    # -- multiplication table and derived data -----------------------------

    @_lazy
    def table(self) -> np.ndarray:
        n = self.order
        if n > LIMITS.table_cap:
            raise GroupTooLarge(
                f"order {n} exceeds the multiplication-table cap {LIMITS.table_cap}"
            )
        dtype = np.int16 if n < 2**15 else np.int32
        el = self.elements.astype(np.int64)
        lookup = self._lookup
        out = np.empty((n, n), dtype=dtype)
        if lookup is None:
            for i in range(n):
                out[i] = self.indices(el[i][el])
            return _readonly(out)
        base, weights, skeys, order = lookup
        right = el[:, base]  # images of the base under each right factor
        chunk = max(1, 4_000_000 // max(1, n * max(len(base), 1)))
        for lo in range(0, n, chunk):
            left = el[lo : lo + chunk]
            prod = left[:, right]  # (c, n, |base|): left[i][right[j]]
            keys = prod @ weights if len(base) else np.zeros(prod.shape[:2], dtype=np.int64)
            out[lo : lo + chunk] = order[np.searchsorted(skeys, keys)]
        return _readonly(out)

    @_lazy
    def inverse(self) -> np.ndarray:
        inv_perms = np.argsort(self.elements, axis=1)
        return _readonly(self.indices(inv_perms))

    @_lazy
    def element_orders(self) -> np.ndarray:
        t = self.table
        n = self.order
        ar = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        power = ar.copy()
        k = 1
        while True:
            hit = (power == 0) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            power = t[power, ar].astype(np.int64)
            k += 1
        return _readonly(orders)

    @_lazy
    def conjugacy_labels(self) -> np.ndarray:
        """Class label per element; labels numbered by smallest member."""
        t = self.table
        inv = self.inverse
        n = self.order
        labels = np.full(n, -1, dtype=np.int64)
        label = 0
        for x in range(n):
            if labels[x] >= 0:
                continue
            conj = t[t[:, x], inv]
            labels[conj] = label
            label += 1
        return _readonly(labels)

    @property
    def num_classes(self) -> int:
        return int(self.conjugacy_labels.max()) + 1

    @_lazy
    def class_sizes(self) -> np.ndarray:
        """Size of the conjugacy class of each element."""
        counts = np.bincount(self.conjugacy_labels)
        return _readonly(counts[self.conjugacy_labels])

    @_lazy
    def sqrt_counts(self) -> np.ndarray:
        ar = np.arange(self.order)
        return _readonly(np.bincount(self.table[ar, ar].astype(np.int64), minlength=self.order))

    @property
    def is_abelian(self) -> bool:
        return bool(np.all(self.class_sizes == 1))

    @_lazy
    def commute_matrix(self) -> np.ndarray:
        t = self.table
        return _readonly(t == t.T)

    def closure(self, seeds) -> np.ndarray:
        """Mask of the subgroup generated by element indices ``seeds``."""
        return _kernels.closure(self.table, 0, np.asarray(seeds, dtype=np.int64))

    def normal_closure(self, seeds) -> np.ndarray:
        seeds = np.asarray(seeds, dtype=np.int64)
        t, inv = self.table, self.inverse
        conj = t[t[:, seeds], inv[:, None]]
        return self.closure(np.unique(conj))

    @_lazy
    def derived_mask(self) -> np.ndarray:
        gens = self.generator_indices
        if len(gens) == 0:
            return self.closure([])
        t, inv = self.table, self.inverse
        a, b = np.meshgrid(gens, gens, indexing="ij")
        comm = t[t[a, b], t[inv[a], inv[b]]].ravel()
        return _readonly(self.normal_closure(comm))

    @property
    def exponent(self) -> int:
        return math.lcm(*(int(x) for x in np.unique(self.element_orders)))

    # -- subgroups ----------------------------------------------------------

    def subgroup_from_mask(self, mask: np.ndarray, name: str | None = None) -> "PermGroup":
        """The subgroup with the given element mask, on the same degree."""
        idx = np.flatnonzero(mask)
        gens = _small_generating_set(self, idx)
        sub = PermGroup(
            self.degree,
            [self.element(i) for i in gens],
            name=name,
            elements=self.elements[idx],
        )
        if "table" in self.__dict__:
            remap = np.full(self.order, -1, dtype=np.int64)
            remap[idx] = np.arange(len(idx))
            sub.__dict__["table"] = _readonly(
                remap[self.table[np.ix_(idx, idx)]].astype(self.table.dtype)
            )
        return sub

    def reduced(self) -> "PermGroup":
        """Same group acting only on the points some generator moves."""
        moved = sorted({i for g in self.generators for i, x in enumerate(g) if x != i})
        if len(moved) == self.degree:
            return self
        relabel = {p: k for k, p in enumerate(moved)}
        gens = [tuple(relabel[g[p]] for p in moved) for g in self.generators]
        out = PermGroup(len(moved), gens, name=self.name)
        if "elements" in self.__dict__:
            el = self.elements[:, moved]
            lut = np.zeros(max(self.degree, 1), dtype=np.int32)
            lut[moved] = np.arange(len(moved))
            # dropped points are fixed by everything and relabelling is
            # monotone, so the lexicographic order is unchanged
            out.__dict__["elements"] = _readonly(lut[el])
            if "table" in self.__dict__:
                out.__dict__["table"] = self.table
        return out


def _small_generating_set(G: PermGroup, idx: np.ndarray) -> list[int]:
    """Greedy generating set for the subgroup with element indices ``idx``."""
    gens: list[int] = []
    if len(idx) <= 1:
        return gens
    target = len(idx)
    current = G.closure([])
    # larger element orders first: they tend to generate more
    orders = G.element_orders[idx] if "table" in G.__dict__ or G.order <= LIMITS.table_cap else None
    candidates = idx[np.argsort(-orders, kind="stable")] if orders is not None else idx
    for x in candidates:
        if current[x]:
            continue
        gens.append(int(x))
        current = G.closure(gens)
        if current.sum() == target:
            break
    return gens


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def trivial_group() -> PermGroup:
    return PermGroup(1, [], name="1")


def cyclic_group(n: int) -> PermGroup:
    if n < 1:
        raise SchemaError("cyclic group needs n >= 1")
    if n == 1:
        return PermGroup(1, [(0,)], name="1")
    return PermGroup(n, [tuple((i + 1) % n for i in range(n))], name=f"Z{n}")


def symmetric_group(n: int) -> PermGroup:
    if n < 1:
        raise SchemaError("symmetric group needs n >= 1")
    if n == 1:
        return PermGroup(1, [], name="1")
    transposition = (1, 0) + tuple(range(2, n))
    gens = [transposition]
    if n > 2:
        gens.append(tuple((i + 1) % n for i in range(n)))
    return PermGroup(n, gens, name=f"S{n}")


def dihedral_group(n: int) -> PermGroup:
    """Dihedral group of order ``2n`` acting on the ``n`` vertices."""
    if n < 3:
        raise SchemaError("dihedral n needs n >= 3 for a faithful action on n points")
    rotation = tuple((i + 1) % n for i in range(n))
    reflection = tuple((-i) % n for i in range(n))
    return PermGroup(n, [rotation, reflection], name=f"D{n}")


def klein4_group() -> PermGroup:
    return PermGroup(4, [(1, 0, 3, 2), (2, 3, 0, 1)], name="V4")


def quaternion8_group() -> PermGroup:
    """Q8 via its left regular action on the 8 points ``±1, ±i, ±j, ±k``."""
    # unit q encoded as (sign, axis) with axis 0..3 = 1, i, j, k
    def mul(a, b):
        (sa, x), (sb, y) = a, b
        if x == 0:
            return sa * sb, y
        if y == 0:
            return sa * sb, x
        if x == y:
            return -sa * sb, 0
        z = 6 - x - y
        sign = 1 if (x, y) in ((1, 2), (2, 3), (3, 1)) else -1
        return sa * sb * sign, z

    units = [(s, a) for a in range(4) for s in (1, -1)]
    pos = {u: i for i, u in enumerate(units)}

    def left(u):
        return tuple(pos[mul(u, v)] for v in units)

    return PermGroup(8, [left((1, 1)), left((1, 2))], name="Q8")


def _paren(name: str | None) -> str | None:
    if name is None:
        return None
    return f"({name})" if " x " in name else name


def direct_product(G: PermGroup, H: PermGroup, *, name: str | None = None) -> PermGroup:
    """``G x H`` acting on the disjoint union of the two point sets."""
    cap = LIMITS.cap
    if G.order * H.order > cap:
        raise GroupTooLarge(f"|G x H| = {G.order * H.order} exceeds the cap {cap}")
    dg, dh = G.degree, H.degree
    gens = [g + tuple(range(dg, dg + dh)) for g in G.generators]
    gens += [tuple(range(dg)) + tuple(x + dg for x in h) for h in H.generators]
    left = np.repeat(G.elements, H.order, axis=0)
    right = np.tile(H.elements + dg, (G.order, 1))
    if name is None and G.name is not None and H.name is not None:
        if G.name == "1" or H.name == "1":
            name = H.name if G.name == "1" else G.name
        else:
            name = f"{G.name} x {H.name}"
    return PermGroup(dg + dh, gens, name=name, elements=np.hstack([left, right]))


def wreath_symmetric(G: PermGroup, n: int, *, name: str | None = None) -> PermGroup:
    """``G wr S_n`` in its imprimitive action on ``n * degree(G)`` points."""
    if n < 1:
        raise SchemaError("wreath product needs n >= 1")
    size = G.order**n * math.factorial(n)
    if size > LIMITS.cap:
        raise GroupTooLarge(f"|G wr S{n}| = {size} exceeds the cap {LIMITS.cap}")
    d = G.degree
    N = n * d
    gens: list[Perm] = []
    for b in range(n):
        for g in G.generators:
            img = list(range(N))
            for p in range(d):
                img[b * d + p] = b * d + g[p]
            gens.append(tuple(img))

    def block_perm(pi: Sequence[int]) -> Perm:
        return tuple(pi[b] * d + p for b in range(n) for p in range(d))

    if n >= 2:
        gens.append(block_perm((1, 0) + tuple(range(2, n))))
    if n >= 3:
        gens.append(block_perm(tuple((b + 1) % n for b in range(n))))

    # element (g_0, ..., g_{n-1}; pi) maps point (b, p) to (pi(b), g_b(p))
    base = G.elements.astype(np.int32)
    rows = []
    for pi in itertools.permutations(range(n)):
        for combo in itertools.product(range(G.order), repeat=n):
            row = np.empty(N, dtype=np.int32)
            for b in range(n):
                row[b * d : (b + 1) * d] = pi[b] * d + base[combo[b]]
            rows.append(row)
    elements = np.unique(np.array(rows, dtype=np.int32).reshape(-1, N), axis=0)
    if name is None and G.name is not None:
        name = f"S{n}" if G.name == "1" else f"{_paren(G.name)} wr S{n}"
    return PermGroup(N, gens, name=name, elements=elements)


def enumerate_elements(G: PermGroup) -> list[Perm]:
    """All elements of ``G`` in lexicographic order of their image tuples."""
    return [G.element(i) for i in range(G.order)]


# ---------------------------------------------------------------------------
# specs and expressions
# ---------------------------------------------------------------------------

_NAMED = {
    "trivial": lambda n=None: trivial_group(),
    "cyclic": cyclic_group,
    "symmetric": symmetric_group,
    "dihedral": dihedral_group,
    "klein4": lambda n=None: klein4_group(),
    "quaternion8": lambda n=None: quaternion8_group(),
}


def group_from_spec(spec, resolver: Callable[[int, int], PermGroup] | None = None) -> PermGroup:
    """Realize a group from a JSON-style dict or a text expression.

    Dict forms: ``{"named": "cyclic", "n": 4}``,
    ``{"perm": {"degree": 4, "generators": [[[1, 2], [3, 4]]]}}`` (1-based
    cycles), ``{"product": [spec, spec, ...]}``,
    ``{"wreath": {"base": spec, "n": 2}}``.  Strings go through
    :func:`parse_group_expr`.
    """
    if isinstance(spec, PermGroup):
        return spec
    if isinstance(spec, str):
        return parse_group_expr(spec, resolver)
    if not isinstance(spec, dict) or len(spec) == 0:
        raise SchemaError(f"not a group spec: {spec!r}")
    if "named" in spec:
        kind = spec["named"]
        if kind not in _NAMED:
            raise SchemaError(f"unknown named group {kind!r}")
        if kind in ("cyclic", "symmetric", "dihedral"):
            if not isinstance(spec.get("n"), int):
                raise SchemaError(f"named group {kind!r} needs an integer 'n'")
            return _NAMED[kind](spec["n"])
        return _NAMED[kind]()
    if "perm" in spec:
        body = spec["perm"]
        degree = body.get("degree")
        if not isinstance(degree, int) or degree < 1:
            raise SchemaError("perm spec needs a positive integer 'degree'")
        gens = [perm_from_cycles(c, degree) for c in body.get("generators", [])]
        return PermGroup(degree, gens)
    if "product" in spec:
        parts = [group_from_spec(s, resolver) for s in spec["product"]]
        if not parts:
            raise SchemaError("empty product")
        out = parts[0]
        for p in parts[1:]:
            out = direct_product(out, p)
        return out
    if "wreath" in spec:
        body = spec["wreath"]
        return wreath_symmetric(group_from_spec(body["base"], resolver), int(body["n"]))
    raise SchemaError(f"not a group spec: {spec!r}")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str) -> list[str]:
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        out.append(m.group(m.lastindex))
        pos = m.end()
    return out


class GroupExprOps:
    """How :class:`ExprParser` builds values; the default builds PermGroups."""

    def named(self, kind: str, n: int | None = None):
        return _NAMED[kind](n) if n is not None else _NAMED[kind]()

    def product(self, a, b):
        return direct_product(a, b)

    def wreath(self, a, n: int):
        return wreath_symmetric(a, n)

    def anonymous(self, order: int, ident: int):
        raise SchemaError(f"anonymous class ({order},{ident}) needs a registry")


class _ResolvingOps(GroupExprOps):
    def __init__(self, resolver):
        self.resolver = resolver

    def anonymous(self, order, ident):
        return self.resolver(order, ident)


class ExprParser:
    """Recursive-descent parser for group expressions.

    Grammar (``wr`` binds tighter than ``x``, both left-associative)::

        expr := term ("x" term)*
        term := atom ("wr" ["S"]INT)*
        atom := "(" expr ")" | "(" INT "," INT ")" | NAME | KEYWORD INT
              | "wreath" "(" expr "," INT ")" | "product" "(" expr ("," expr)* ")"
    """

    def __init__(self, text: str, ops: GroupExprOps):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.ops = ops

    def parse(self):
        value = self.expr()
        if self.peek() is not None:
            raise SchemaError(f"trailing input in group expression {self.text!r}")
        return value

    def peek(self, k: int = 0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise SchemaError(f"cannot parse group expression {self.text!r}")
        self.i += 1
        return tok

    def integer(self) -> int:
        tok = self.take()
        if not tok.isdigit():
            raise SchemaError(f"expected an integer in {self.text!r}")
        return int(tok)

    def expr(self):
        g = self.term()
        while self.peek() == "x":
            self.take()
            g = self.ops.product(g, self.term())
        return g

    def term(self):
        g = self.atom()
        while self.peek() == "wr":
            self.take()
            tok = self.take()
            m = re.fullmatch(r"S?(\d+)", tok)
            if m is None:
                raise SchemaError(f"expected S<n> after 'wr' in {self.text!r}")
            g = self.ops.wreath(g, int(m.group(1)))
        return g

    def atom(self):
        ops = self.ops
        tok = self.take()
        if tok == "(":
            if self.peek() is not None and self.peek().isdigit() and self.peek(1) == ",":
                order = self.integer()
                self.take(",")
                ident = self.integer()
                self.take(")")
                return ops.anonymous(order, ident)
            g = self.expr()
            self.take(")")
            return g
        if tok in ("1", "trivial"):
            return ops.named("trivial")
        if tok in ("V4", "K4", "klein4"):
            return ops.named("klein4")
        if tok in ("Q8", "quaternion8"):
            return ops.named("quaternion8")
        if tok in ("cyclic", "symmetric", "dihedral"):
            return ops.named(tok, self.integer())
        if tok == "wreath":
            self.take("(")
            g = self.expr()
            self.take(",")
            n = self.integer()
            self.take(")")
            return ops.wreath(g, n)
        if tok == "product":
            self.take("(")
            g = self.expr()
            while self.peek() == ",":
                self.take()
                g = ops.product(g, self.expr())
            self.take(")")
            return g
        m = re.fullmatch(r"([ZCSD])(\d+)", tok)
        if m:
            kind = {"Z": "cyclic", "C": "cyclic", "S": "symmetric", "D": "dihedral"}[m.group(1)]
            return ops.named(kind, int(m.group(2)))
        raise SchemaError(f"unknown group token {tok!r} in {self.text!r}")


def parse_group_expr(text: str, resolver: Callable[[int, int], PermGroup] | None = None) -> PermGroup:
    """Parse ``"Z2 wr S3"``, ``"S3 x Z2"``, ``"wreath(cyclic 2, 2)"`` and friends.

    ``(order,id)`` refers to an anonymous registry class via ``resolver``.
    """
    ops = _ResolvingOps(resolver) if resolver is not None else GroupExprOps()
    return ExprParser(text, ops).parse()


# ---------------------------------------------------------------------------
# subgroups and homomorphism counts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubgroupClass:
    """One conjugacy class of subgroups: a representative and the class size."""

    group: PermGroup
    size: int
    mask: np.ndarray

    @property
    def order(self) -> int:
        return self.group.order


def _mask_key(mask: np.ndarray) -> bytes:
    return np.packbits(mask).tobytes()


def _conjugates(G: PermGroup, mask: np.ndarray) -> dict[bytes, np.ndarray]:
    idx = np.flatnonzero(mask)
    t, inv = G.table, G.inverse
    images = t[t[:, idx], inv[:, None]]  # row g: g x g^-1 for x in the subgroup
    out: dict[bytes, np.ndarray] = {}
    for row in images:
        m = np.zeros(G.order, dtype=np.bool_)
        m[row] = True
        out.setdefault(_mask_key(m), m)
    return out


def _subgroup_classes(G: PermGroup):
    if G.order > LIMITS.subgroup_cap:
        raise SubgroupEnumTooLarge(
            f"subgroup enumeration capped at order {LIMITS.subgroup_cap}, got {G.order}"
        )
    cyclics: dict[bytes, np.ndarray] = {}
    for x in range(G.order):
        m = G.closure([x])
        cyclics.setdefault(_mask_key(m), m)
    cyclic_list = list(cyclics.values())

    lookup: dict[bytes, int] = {}
    classes: list[list[np.ndarray]] = []

    def register(mask):
        conj = _conjugates(G, mask)
        k = len(classes)
        for key in conj:
            lookup[key] = k
        classes.append(list(conj.values()))

    trivial = G.closure([])
    register(trivial)
    queue = [trivial]
    while queue:
        U = queue.pop(0)
        for Z in cyclic_list:
            if not np.any(Z & ~U):
                continue
            W = G.closure(np.flatnonzero(U | Z))
            if _mask_key(W) not in lookup:
                register(W)
                queue.append(W)

    def rep_key(m):
        return tuple(np.flatnonzero(m))

    ordered = []
    for members in classes:
        rep = min(members, key=rep_key)
        ordered.append((int(rep.sum()), rep_key(rep), rep, len(members), members))
    ordered.sort(key=lambda r: (r[0], r[1]))
    return ordered


def subgroup_conjugacy_classes(G: PermGroup) -> list[SubgroupClass]:
    """Conjugacy classes of subgroups, sorted by order then by element indices.

    Built by cyclic extension: starting from the trivial group, join every
    class representative with every cyclic subgroup it does not contain.
    """
    return [
        SubgroupClass(group=G.subgroup_from_mask(rep), size=size, mask=rep)
        for _, _, rep, size, _ in _subgroup_classes(G)
    ]


def subgroup_class_lookup(G: PermGroup) -> tuple[list[SubgroupClass], dict[bytes, int]]:
    """Classes plus a map from any subgroup mask key to its class position."""
    raw = _subgroup_classes(G)
    classes = []
    lookup: dict[bytes, int] = {}
    for pos, (_, _, rep, size, members) in enumerate(raw):
        classes.append(SubgroupClass(group=G.subgroup_from_mask(rep), size=size, mask=rep))
        for m in members:
            lookup[_mask_key(m)] = pos
    return classes, lookup


@dataclass(frozen=True)
class GammaSpec:
    """The source group of ``Hom(Gamma, G)``: free abelian or free of a given rank."""

    kind: str
    rank: int

    def __post_init__(self):
        if self.kind not in ("free-abelian", "free"):
            raise SchemaError(f"unknown Gamma kind {self.kind!r}")
        if self.rank < 0:
            raise SchemaError("Gamma rank must be >= 0")


def hom_count(gamma: GammaSpec, G: PermGroup) -> int:
    """``#Hom(Gamma, G)``: commuting tuples for ``Z^m``, all tuples for ``F_m``."""
    m = gamma.rank
    n = G.order
    if m == 0:
        return 1
    if gamma.kind == "free":
        return n**m
    if m == 1:
        return n
    if G.is_abelian:
        return n**m
    if n ** (m - 1) > LIMITS.hom_scan_cap:
        raise GroupTooLarge(f"commuting {m}-tuple scan over order {n} is too large")
    return _kernels.commuting_tuples(G.commute_matrix, m)
