import random

import pytest

from chiun.errors import SchemaError
from chiun.groupring import RElement, T
from chiun.lambdaseries import (
    LambdaStructure,
    SeriesR,
    base_series,
    decompose_lambda_factors,
    element_lambda_series,
    is_effective,
    monomial_lambda_series,
    power,
    reassemble,
    series_inverse,
    series_mul,
    series_pow_int,
    substitute_power,
)

SYM, CONF = LambdaStructure.SYMMETRIC, LambdaStructure.CONFIGURATION


def series(reg, *coeffs):
    return SeriesR([c if isinstance(c, RElement) else c * T("1", reg) for c in coeffs])


def cls(text, reg):
    return next(iter(T(text, reg).terms))


def test_structure_parse():
    assert LambdaStructure.parse("sym") is SYM
    assert LambdaStructure.parse("configuration-space") is CONF
    with pytest.raises(SchemaError):
        LambdaStructure.parse("motivic")


def test_inverse_and_products(registry):
    f = series(registry, 1, 1, 0, 0, 0)
    assert series_inverse(f) == series(registry, 1, -1, 1, -1, 1)
    g = series(registry, 1, 2, -1, 3, 0)
    assert series_mul(g, series_inverse(g)) == SeriesR.one(4, registry)
    z2 = T("Z2", registry)
    lhs = series_mul(series(registry, 1, z2, 0), series(registry, 1, -z2, 0))
    assert lhs == series(registry, 1, 0, -T("Z2 x Z2", registry))
    assert series_pow_int(f, -2) == series_inverse(series_mul(f, f))
    with pytest.raises(SchemaError):
        series_inverse(series(registry, 2, 1))


def test_monomial_series_examples(registry):
    z1 = monomial_lambda_series(registry.trivial, SYM, 3)
    assert z1 == series(registry, 1, 1, T("S2", registry), T("S3", registry))
    for text in ("1", "Z2", "S3"):
        c = cls(text, registry)
        assert monomial_lambda_series(c, CONF, 3) == series(registry, 1, T(text, registry), 0, 0)
    z2 = cls("Z2", registry)
    assert monomial_lambda_series(z2, SYM, 2) == series(registry, 1, T("Z2", registry), T("Z2 wr S2", registry))


def test_element_series_examples(registry):
    one = T("1", registry)
    assert element_lambda_series(-one, SYM, 2, registry) == series(registry, 1, -1, one - T("S2", registry))
    assert element_lambda_series(2 * one, CONF, 3, registry) == series(registry, 1, 2, 1, 0)
    z2 = T("Z2", registry)
    assert element_lambda_series(z2 + one, CONF, 3, registry) == series(registry, 1, z2 + one, z2, 0)


def test_decomposition_examples(registry):
    one = T("1", registry)
    z1 = base_series(SYM, 4, registry)
    assert decompose_lambda_factors(z1, SYM) == [one, RElement(), RElement(), RElement()]
    b = decompose_lambda_factors(series(registry, 1, 1, 0), SYM)
    assert b == [one, -T("S2", registry)]
    b = decompose_lambda_factors(series(registry, 1, 1, 0, 0), CONF)
    assert b == [one, RElement(), RElement()]


def test_power_examples(registry):
    z2 = cls("Z2", registry)
    assert power(base_series(SYM, 3, registry), T("Z2", registry), SYM) == monomial_lambda_series(z2, SYM, 3)
    f = series(registry, 1, 1, 0, 0)
    for s in (SYM, CONF):
        assert power(f, T("1", registry), s) == f
    w = power(series(registry, 1, 1, 0), T("Z2", registry), SYM)
    assert w[2] == T("Z2 wr S2", registry) - T("S2 x Z2", registry)
    assert not is_effective(w)
    assert is_effective(monomial_lambda_series(z2, SYM, 3))


ATOMS = ("1", "Z2", "Z3")


def _draw(rng, reg, effective=False):
    out = RElement()
    for _ in range(rng.randint(1, 2)):
        sign = 1 if effective else rng.choice((1, -1))
        out = out + sign * T(rng.choice(ATOMS), reg)
    return out


def _draw_series(rng, reg, N, effective=False):
    return SeriesR(
        [T("1", reg)] + [_draw(rng, reg, effective) if rng.random() < 0.8 else RElement() for _ in range(N)]
    )


@pytest.mark.parametrize("s", [SYM, CONF], ids=["sym", "conf"])
def test_lambda_additivity_and_round_trip(s, registry, virtual_wreaths):
    rng = random.Random(7)
    N = 3
    for _ in range(15):
        a, b = _draw(rng, registry), _draw(rng, registry)
        lhs = element_lambda_series(a + b, s, N, registry)
        assert lhs == series_mul(element_lambda_series(a, s, N, registry), element_lambda_series(b, s, N, registry))
        f = _draw_series(rng, registry, N)
        assert reassemble(decompose_lambda_factors(f, s), s, N, registry) == f


@pytest.mark.parametrize("s", [SYM, CONF], ids=["sym", "conf"])
def test_power_axioms_small(s, registry, virtual_wreaths):
    rng = random.Random(13)
    N = 3
    one = SeriesR.one(N, registry)
    for _ in range(10):
        f, g = _draw_series(rng, registry, N), _draw_series(rng, registry, N)
        m, m2 = _draw(rng, registry), _draw(rng, registry)
        fm = power(f, m, s)
        assert power(series_mul(f, g), m, s) == series_mul(fm, power(g, m, s))
        assert power(f, m + m2, s) == series_mul(fm, power(f, m2, s))
        assert power(f, T("1", registry), s) == f
        assert power(f, RElement(), s) == one
        assert power(fm, m2, s) == power(f, m * m2, s)
        # substitution t -> t^2 commutes with taking powers
        f2 = substitute_power(f.truncate(1), 2, N)
        assert power(f2, m, s) == substitute_power(power(f.truncate(1), m, s), 2, N)


def test_integer_exponent_agrees_with_repeated_product(registry):
    rng = random.Random(1)
    for s in (SYM, CONF):
        f = _draw_series(rng, registry, 3)
        for c in range(-2, 4):
            assert power(f, c * T("1", registry), s) == series_pow_int(f, c)


def test_series_text(registry):
    z2 = T("Z2", registry)
    f = series(registry, 1, z2, 0, z2 - T("1", registry))
    assert str(f) == "1 + (1*[Z2]) t + (1*[Z2] - 1*[1]) t^3"


def test_truncate(registry):
    f = series(registry, 1, 2, 3)
    assert f.truncate(1) == series(registry, 1, 2)
    assert f.truncate(4) == series(registry, 1, 2, 3, 0, 0)
