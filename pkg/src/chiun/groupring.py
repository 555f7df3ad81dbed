"""The group ring R: integer combinations of isomorphism classes of finite groups.

Multiplication is ``T^G * T^H = T^(G x H)``.  Additive invariants are
obtained from an element by choosing a value ``tau(G)`` for every class
(:class:`HomSpec`) and evaluating linearly.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import SchemaError
from .isoclass import ClassRegistry, GroupClassId, default_registry
from .permgroup import ExprParser, GammaSpec, GroupExprOps, PermGroup, hom_count

__all__ = [
    "RElement",
    "HomSpec",
    "Polynomial",
    "T",
    "r_add",
    "r_mul",
    "r_neg",
    "r_scale",
    "evaluate_hom",
    "r_to_polynomial",
    "format_relement",
    "parse_relement",
    "class_from_expr",
]


class RElement:
    """An immutable element ``sum a_G T^G`` of R; zero coefficients are dropped."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[GroupClassId, int] | Iterable[tuple[GroupClassId, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[GroupClassId, int] = {}
        for cls, coef in items:
            acc[cls] = acc.get(cls, 0) + int(coef)
        self._terms = {c: a for c, a in sorted(acc.items(), key=lambda kv: kv[0].sort_key()) if a}
        self._hash = None

    @classmethod
    def zero(cls) -> "RElement":
        return cls()

    @classmethod
    def one(cls, registry: ClassRegistry | None = None) -> "RElement":
        return cls({(registry or default_registry()).trivial: 1})

    @classmethod
    def monomial(cls, g: GroupClassId, coef: int = 1) -> "RElement":
        return cls({g: coef})

    @property
    def terms(self) -> dict[GroupClassId, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, g: GroupClassId) -> int:
        return self._terms.get(g, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._terms
        return isinstance(other, RElement) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "RElement") -> "RElement":
        return r_add(self, other)

    def __sub__(self, other: "RElement") -> "RElement":
        return r_add(self, r_neg(other))

    def __neg__(self) -> "RElement":
        return r_neg(self)

    def __mul__(self, other) -> "RElement":
        if isinstance(other, int):
            return r_scale(self, other)
        return r_mul(self, other)

    def __rmul__(self, other) -> "RElement":
        if isinstance(other, int):
            return r_scale(self, other)
        return NotImplemented

    def is_effective(self) -> bool:
        """All coefficients non-negative (membership in R_+)."""
        return all(a > 0 for a in self._terms.values())

    def __str__(self) -> str:
        return format_relement(self)

    def __repr__(self) -> str:
        return f"RElement({format_relement(self)!r})"


def r_add(a: RElement, b: RElement) -> RElement:
    return RElement(list(a.items()) + list(b.items()))


def r_neg(a: RElement) -> RElement:
    return RElement({c: -x for c, x in a.items()})


def r_scale(a: RElement, k: int) -> RElement:
    return RElement({c: k * x for c, x in a.items()})


def r_mul(a: RElement, b: RElement) -> RElement:
    """Bilinear extension of ``T^G * T^H = T^(G x H)``."""
    out: list[tuple[GroupClassId, int]] = []
    for g, x in a.items():
        reg = g._registry
        for h, y in b.items():
            out.append((reg.product(g, h), x * y))
    return RElement(out)


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------


def format_relement(a: RElement) -> str:
    """Canonical text, e.g. ``2*[Z2] - 1*[1]``.

    Terms run from the largest class to the smallest by (order, id); zero
    prints as ``0``.
    """
    items = sorted(a.items(), key=lambda kv: kv[0].sort_key(), reverse=True)
    if not items:
        return "0"
    parts = []
    for k, (cls, coef) in enumerate(items):
        body = f"{abs(coef)}*[{cls.name}]"
        if k == 0:
            parts.append(body if coef > 0 else f"-{body}")
        else:
            parts.append(f"{'+' if coef > 0 else '-'} {body}")
    return " ".join(parts)


class _ClassOps(GroupExprOps):
    """Evaluates group expressions directly on classes of a registry."""

    def __init__(self, registry: ClassRegistry):
        self.reg = registry

    def named(self, kind, n=None):
        return self.reg.classify(super().named(kind, n))

    def product(self, a, b):
        return self.reg.product(a, b)

    def wreath(self, a, n):
        return self.reg.wreath(a, n)

    def anonymous(self, order, ident):
        try:
            return self.reg.lookup(order, ident)
        except KeyError as exc:
            raise SchemaError(str(exc)) from None


def class_from_expr(text: str, registry: ClassRegistry | None = None) -> GroupClassId:
    """The class named by a group expression such as ``Z2 wr S3 x Z3``."""
    return ExprParser(text, _ClassOps(registry or default_registry())).parse()


def T(g: PermGroup | GroupClassId | str, registry: ClassRegistry | None = None) -> RElement:
    """The monomial ``T^G`` for a group, a class or a group expression."""
    reg = registry or default_registry()
    if isinstance(g, GroupClassId):
        return RElement({g: 1})
    if isinstance(g, PermGroup):
        return RElement({reg.classify(g): 1})
    return RElement({class_from_expr(g, reg): 1})


_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*(\*)?\s*)?")


def parse_relement(text: str, registry: ClassRegistry | None = None) -> RElement:
    """Parse the canonical text form (and looser variants like ``[S3] - 2``).

    A bare integer ``c`` means ``c*[1]``.
    """
    reg = registry or default_registry()
    s = text.strip()
    if s == "0":
        return RElement()
    pos = 0
    terms: list[tuple[GroupClassId, int]] = []
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        sign, digits, star = m.group(1), m.group(2), m.group(3)
        if sign is None and not first:
            raise SchemaError(f"expected '+' or '-' at position {pos} in {text!r}")
        pos = m.end()
        coef = int(digits) if digits is not None else 1
        if sign == "-":
            coef = -coef
        if pos < len(s) and s[pos] == "[":
            depth = 0
            end = pos
            while end < len(s):
                depth += {"[": 1, "]": -1}.get(s[end], 0)
                if depth == 0:
                    break
                end += 1
            if end >= len(s):
                raise SchemaError(f"unbalanced brackets in {text!r}")
            cls = class_from_expr(s[pos + 1 : end], reg)
            pos = end + 1
        elif digits is not None and star is None:
            cls = reg.trivial
        else:
            raise SchemaError(f"cannot parse ring element {text!r}")
        terms.append((cls, coef))
        first = False
        while pos < len(s) and s[pos].isspace():
            pos += 1
    if first:
        raise SchemaError(f"empty ring element {text!r}")
    return RElement(terms)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

_KINDS = ("euler-satake", "orbifold", "order-k", "gamma-es", "quotient-euler", "custom")


@dataclass(frozen=True)
class HomSpec:
    """A choice of ``tau(G) = r(T^G)``; evaluation is ``sum a_G tau(G)``.

    Built-in kinds are multiplicative over direct products, so they are
    evaluated on Krull-Schmidt factors and never need the full group.
    """

    kind: str
    k: int = 0
    gamma: GammaSpec | None = None
    table: tuple[tuple[GroupClassId, Fraction], ...] = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise SchemaError(f"unknown invariant kind {self.kind!r}")
        if self.kind == "order-k" and self.k < 0:
            raise SchemaError("order-k needs k >= 0")
        if self.kind == "gamma-es" and self.gamma is None:
            raise SchemaError("gamma-es needs a GammaSpec")

    @classmethod
    def euler_satake(cls) -> "HomSpec":
        return cls("euler-satake")

    @classmethod
    def orbifold(cls) -> "HomSpec":
        return cls("orbifold")

    @classmethod
    def order(cls, k: int) -> "HomSpec":
        return cls("order-k", k=k)

    @classmethod
    def gamma_es(cls, gamma: GammaSpec) -> "HomSpec":
        return cls("gamma-es", gamma=gamma)

    @classmethod
    def quotient_euler(cls) -> "HomSpec":
        return cls("quotient-euler")

    @classmethod
    def custom(cls, values: Mapping[GroupClassId, Fraction | int]) -> "HomSpec":
        table = tuple(sorted(((c, Fraction(v)) for c, v in values.items()), key=lambda kv: kv[0].sort_key()))
        return cls("custom", table=table)

    @classmethod
    def parse(cls, text: str) -> "HomSpec":
        """CLI spelling: ``es``, ``orb``, ``order:K``, ``gamma:free:M``,
        ``gamma:free-abelian:M`` or ``quotient``."""
        t = text.strip()
        if t == "es":
            return cls.euler_satake()
        if t == "orb":
            return cls.orbifold()
        if t == "quotient":
            return cls.quotient_euler()
        m = re.fullmatch(r"order:(\d+)", t)
        if m:
            return cls.order(int(m.group(1)))
        m = re.fullmatch(r"gamma:(free|free-abelian):(\d+)", t)
        if m:
            return cls.gamma_es(GammaSpec(m.group(1), int(m.group(2))))
        raise SchemaError(f"unknown invariant kind {text!r}")

    def _gamma(self) -> GammaSpec | None:
        if self.kind == "orbifold":
            return GammaSpec("free-abelian", 2)
        if self.kind == "order-k":
            return GammaSpec("free-abelian", self.k + 1)
        return self.gamma

    def tau(self, g: GroupClassId) -> Fraction:
        if self.kind == "custom":
            for c, v in self.table:
                if c == g:
                    return v
            raise SchemaError(f"custom invariant has no value for class {g.name}")
        if self.kind == "quotient-euler":
            return Fraction(1)
        if self.kind == "euler-satake":
            return Fraction(1, g.order)
        cache = g._registry.memo.setdefault(("tau", self), {})
        hit = cache.get(g.id)
        if hit is not None:
            return hit
        gamma = self._gamma()
        value = Fraction(1)
        for f in g._registry.factors(g):
            rep = f.representative
            value *= Fraction(hom_count(gamma, rep), rep.order)
        cache[g.id] = value
        return value


def evaluate_hom(a: RElement, h: HomSpec) -> Fraction:
    """``sum a_G * tau(G)`` as an exact rational."""
    return sum((Fraction(x) * h.tau(g) for g, x in a.items()), Fraction(0))


# ---------------------------------------------------------------------------
# polynomial form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """An element of Z[T_G : G indecomposable]; monomials are (class, power) tuples."""

    terms: tuple[tuple[tuple[tuple[GroupClassId, int], ...], int], ...]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, (mono, coef) in enumerate(self.terms):
            factors = "*".join(
                f"T[{c.name}]" + (f"^{e}" if e > 1 else "") for c, e in mono
            )
            mag = abs(coef)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = factors
            else:
                body = f"{mag}*{factors}"
            if k == 0:
                parts.append(body if coef > 0 else f"-{body}")
            else:
                parts.append(f"{'+' if coef > 0 else '-'} {body}")
        return " ".join(parts)


def r_to_polynomial(a: RElement) -> Polynomial:
    """Rewrite every ``T^G`` as the product of ``T_F`` over its indecomposable factors."""
    out: dict[tuple, int] = {}
    for g, x in a.items():
        powers: dict[GroupClassId, int] = {}
        for f in g._registry.factors(g):
            powers[f] = powers.get(f, 0) + 1
        mono = tuple(sorted(powers.items(), key=lambda kv: kv[0].sort_key()))
        out[mono] = out.get(mono, 0) + x
    ordered = sorted(
        ((m, c) for m, c in out.items() if c),
        key=lambda mc: (-sum(e for _, e in mc[0]), [(-c.order, -c.id, -e) for c, e in mc[0]]),
    )
    return Polynomial(tuple(ordered))
