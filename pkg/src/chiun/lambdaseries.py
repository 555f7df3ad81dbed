"""Truncated power series over R, the two lambda-structures and their power structures.

A lambda-structure assigns to every ``A`` in R a series
``nu_A(t) = 1 + A t + ...`` with ``nu_(A+B) = nu_A nu_B``; it is fixed by
its values on monomials ``T^G``:

* symmetric-product: ``zeta_(T^G)(t) = 1 + sum_n T^(G wr S_n) t^n``
* configuration-space: ``lambda_(T^G)(t) = 1 + T^G t``

Every ``f`` in ``1 + tR[[t]]`` factors uniquely as ``prod_k nu_(b_k)(t^k)``,
and the induced power structure is ``f^m = prod_k nu_(b_k m)(t^k)``.
"""
from __future__ import annotations

import enum
import threading
from typing import Sequence

from .errors import SchemaError
from .groupring import RElement, format_relement, r_mul
from .isoclass import ClassRegistry, GroupClassId, default_registry

__all__ = [
    "LambdaStructure",
    "SeriesR",
    "series_mul",
    "series_inverse",
    "series_pow_int",
    "substitute_power",
    "monomial_lambda_series",
    "element_lambda_series",
    "decompose_lambda_factors",
    "reassemble",
    "power",
    "base_series",
    "is_effective",
    "DEFAULT_DEGREE",
]

DEFAULT_DEGREE = 4


class LambdaStructure(enum.Enum):
    SYMMETRIC = "symmetric-product"
    CONFIGURATION = "configuration-space"

    @classmethod
    def parse(cls, text: "str | LambdaStructure") -> "LambdaStructure":
        if isinstance(text, LambdaStructure):
            return text
        key = text.strip().lower()
        if key in ("sym", "symmetric", "symmetric-product", "zeta"):
            return cls.SYMMETRIC
        if key in ("conf", "configuration", "configuration-space", "lambda"):
            return cls.CONFIGURATION
        raise SchemaError(f"unknown lambda-structure {text!r}")


class SeriesR:
    """``c_0 + c_1 t + ... + c_N t^N`` with coefficients in R, exact mod ``t^(N+1)``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[RElement]):
        if not coeffs:
            raise ValueError("a series needs at least the constant term")
        self.coeffs: tuple[RElement, ...] = tuple(coeffs)

    @classmethod
    def one(cls, N: int, registry: ClassRegistry | None = None) -> "SeriesR":
        return cls([RElement.one(registry)] + [RElement()] * N)

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> RElement:
        return self.coeffs[k] if k < len(self.coeffs) else RElement()

    def __eq__(self, other) -> bool:
        return isinstance(other, SeriesR) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __mul__(self, other: "SeriesR") -> "SeriesR":
        return series_mul(self, other)

    def truncate(self, N: int) -> "SeriesR":
        if N <= self.N:
            return SeriesR(self.coeffs[: N + 1])
        return SeriesR(self.coeffs + (RElement(),) * (N - self.N))

    def map(self, fn) -> list:
        return [fn(c) for c in self.coeffs]

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if k == 0:
                one = c == RElement.one(_registry_of(c))
                parts.append("1" if one else f"({format_relement(c)})")
            elif c:
                parts.append(f"({format_relement(c)}) t" + (f"^{k}" if k > 1 else ""))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"SeriesR({str(self)!r}, N={self.N})"


def _registry_of(a: RElement) -> ClassRegistry:
    for g, _ in a.items():
        return g._registry
    return default_registry()


def _check_unit(f: SeriesR) -> None:
    if f.coeffs[0] != RElement.one(_registry_of(f.coeffs[0])):
        raise SchemaError("constant term must be the unit T^1")


def series_mul(f: SeriesR, g: SeriesR) -> SeriesR:
    """Cauchy product, truncated to the smaller of the two degrees."""
    N = min(f.N, g.N)
    out = []
    for n in range(N + 1):
        terms: list[tuple[GroupClassId, int]] = []
        for i in range(n + 1):
            a, b = f.coeffs[i], g.coeffs[n - i]
            if a and b:
                terms.extend(r_mul(a, b).items())
        out.append(RElement(terms))
    return SeriesR(out)


def series_inverse(f: SeriesR) -> SeriesR:
    """The multiplicative inverse; requires constant term ``T^1``."""
    _check_unit(f)
    N = f.N
    inv = [f.coeffs[0]]
    for n in range(1, N + 1):
        terms: list[tuple[GroupClassId, int]] = []
        for i in range(1, n + 1):
            if f.coeffs[i] and inv[n - i]:
                terms.extend((g, -x) for g, x in r_mul(f.coeffs[i], inv[n - i]).items())
        inv.append(RElement(terms))
    return SeriesR(inv)


def series_pow_int(f: SeriesR, n: int) -> SeriesR:
    """``f^n`` for an integer ``n`` by repeated squaring."""
    if n < 0:
        return series_pow_int(series_inverse(f), -n)
    result = SeriesR.one(f.N, _registry_of(f.coeffs[0]))
    base = f
    while n:
        if n & 1:
            result = series_mul(result, base)
        n >>= 1
        if n:
            base = series_mul(base, base)
    return result


def substitute_power(f: SeriesR, k: int, N: int | None = None) -> SeriesR:
    """``f(t^k)`` truncated at degree ``N`` (default: ``f``'s degree times k)."""
    N = f.N * k if N is None else N
    out = [RElement()] * (N + 1)
    for i, c in enumerate(f.coeffs):
        if i * k > N:
            break
        out[i * k] = c
    return SeriesR(out)


# ---------------------------------------------------------------------------
# lambda-series
# ---------------------------------------------------------------------------

_mono_lock = threading.Lock()


def monomial_lambda_series(
    G: GroupClassId, s: LambdaStructure | str, N: int = DEFAULT_DEGREE
) -> SeriesR:
    """``zeta_(T^G)`` or ``lambda_(T^G)`` up to degree ``N``."""
    s = LambdaStructure.parse(s)
    reg = G._registry
    key = (G.id, s, N)
    with _mono_lock:
        cache = reg.memo.setdefault("lambda-series", {})
    hit = cache.get(key)
    if hit is not None:
        return hit
    coeffs = [RElement.one(reg)]
    if s is LambdaStructure.CONFIGURATION:
        coeffs += [RElement({G: 1})] + [RElement()] * (N - 1)
    else:
        coeffs += [RElement({reg.wreath(G, n): 1}) for n in range(1, N + 1)]
    out = SeriesR(coeffs[: N + 1])
    with _mono_lock:
        cache[key] = out
    return out


def element_lambda_series(
    A: RElement, s: LambdaStructure | str, N: int = DEFAULT_DEGREE, registry: ClassRegistry | None = None
) -> SeriesR:
    """``nu_A = prod_G (nu_(T^G))^(a_G)``."""
    s = LambdaStructure.parse(s)
    reg = registry or _registry_of(A)
    out = SeriesR.one(N, reg)
    for g, a in A.items():
        out = series_mul(out, series_pow_int(monomial_lambda_series(g, s, N), a))
    return out


def base_series(s: LambdaStructure | str, N: int = DEFAULT_DEGREE, registry: ClassRegistry | None = None) -> SeriesR:
    """``nu_1``: ``zeta_1 = 1 + sum T^(S_n) t^n`` or ``1 + t``."""
    reg = registry or default_registry()
    return monomial_lambda_series(reg.trivial, s, N)


def decompose_lambda_factors(f: SeriesR, s: LambdaStructure | str) -> list[RElement]:
    """``[b_1, ..., b_N]`` with ``f = prod_k nu_(b_k)(t^k)`` mod ``t^(N+1)``.

    Factors are stripped in increasing ``k``: once the factors below ``k``
    are divided out, the coefficient of ``t^k`` is ``b_k``.
    """
    s = LambdaStructure.parse(s)
    _check_unit(f)
    N = f.N
    reg = _registry_of(f.coeffs[0])
    g = f
    bs: list[RElement] = []
    for k in range(1, N + 1):
        b = g.coeffs[k]
        bs.append(b)
        if b and k < N:
            factor = substitute_power(element_lambda_series(b, s, N // k, reg), k, N)
            g = series_mul(g, series_inverse(factor))
    return bs


def reassemble(bs: Sequence[RElement], s: LambdaStructure | str, N: int | None = None,
               registry: ClassRegistry | None = None) -> SeriesR:
    """``prod_k nu_(b_k)(t^k)``, the inverse of :func:`decompose_lambda_factors`."""
    s = LambdaStructure.parse(s)
    N = len(bs) if N is None else N
    reg = registry or default_registry()
    out = SeriesR.one(N, reg)
    for k, b in enumerate(bs[:N], start=1):
        if b:
            out = series_mul(out, substitute_power(element_lambda_series(b, s, N // k, reg), k, N))
    return out


def power(f: SeriesR, m: RElement, s: LambdaStructure | str) -> SeriesR:
    """``f^m := prod_k nu_(b_k m)(t^k)`` with ``b`` from the factor decomposition."""
    s = LambdaStructure.parse(s)
    bs = decompose_lambda_factors(f, s)
    return reassemble([r_mul(b, m) for b in bs], s, f.N, _registry_of(f.coeffs[0]))


def is_effective(f: SeriesR) -> bool:
    """Every coefficient has non-negative coefficients in R."""
    return all(c.is_effective() for c in f.coeffs)
