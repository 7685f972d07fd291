from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, strategies as st

from oracles import naive_mul
from serrezeros.qseries import (EXACT, DomainMismatchError, QSeries, TruncationError, big_float,
                                d_operator, ring_ops, series_inv)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)


@st.composite
def series(draw, min_len=1, max_len=12, unit=False):
    cs = draw(st.lists(fractions, min_size=min_len, max_size=max_len))
    if unit:
        cs[0] = draw(fractions.filter(lambda x: x != 0))
    v = draw(st.integers(-3, 3))
    return QSeries(cs, v)


def test_canonical_form_strips_leading_zeros():
    s = QSeries([0, 0, 3, 4], valuation=-1, prec=5)
    assert s.valuation == 1
    assert s.coeffs == (3, 4, 0, 0)
    assert s.truncation == 4


def test_zero_series():
    z = QSeries([0, 0], 2)
    assert z.is_zero() and z.valuation == 0 and z.prec == 4


def test_coefficient_beyond_truncation_raises():
    with pytest.raises(TruncationError):
        QSeries([1, 2], 0).coefficient(5)


def test_geometric_inverse():
    s = QSeries([1, -1], 0, prec=10)
    assert s.inverse() == QSeries([1] * 10, 0, prec=10)


def test_laurent_inverse_of_q():
    q = QSeries([1, 1], 1)
    inv = q.inverse()
    assert inv.valuation == -1 and inv.truncation == 2


def test_mixed_domains_rejected():
    with pytest.raises(DomainMismatchError):
        QSeries([1, 2]) + QSeries([1, 2]).to_float(128)


def test_float_domain_needs_64_bits():
    with pytest.raises(ValueError):
        big_float(32)


def test_negative_power_rejected():
    with pytest.raises(ValueError):
        QSeries([1, 1]) ** -1


def test_ring_ops_surface():
    a, b = QSeries([1, 2, 3]), QSeries([0, 1, 1])
    assert ring_ops("add", a, b) == a + b
    assert ring_ops("mul", a, b) == a * b
    assert ring_ops("scalar-mul", a, 3) == a.scale(3)
    assert ring_ops("pow", a, 2) == a * a
    assert series_inv(a) == a.inverse()
    assert d_operator(a) == a.derivative()
    with pytest.raises(ValueError):
        ring_ops("div", a, b)


@given(series(unit=True), series(unit=True))
def test_product_matches_naive_convolution(a, b):
    p = a * b
    t = min(a.truncation, b.truncation)
    want = naive_mul(list(a.coeffs), list(b.coeffs), t)
    assert p.truncation == t
    assert [p.coefficient(a.valuation + b.valuation + i) for i in range(t)] == want


@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert (a + b) * c == a * c + b * c
    assert a + b == b + a


@given(series(unit=True))
def test_inverse_is_two_sided(a):
    one = a * a.inverse()
    assert one == QSeries([1], 0, a.truncation)


@given(series(), series())
def test_derivative_is_a_derivation(a, b):
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


@given(series(min_len=2), series(min_len=2), st.integers(1, 4))
def test_substitution_is_a_ring_map(a, b, p):
    assert (a * b).substitute_power(p) == a.substitute_power(p) * b.substitute_power(p)


@given(series())
def test_json_roundtrip_exact(a):
    assert QSeries.from_json(a.to_json()) == a


@given(series())
def test_json_roundtrip_float(a):
    f = a.to_float(160)
    back = QSeries.from_json(f.to_json())
    assert back.domain == f.domain and back.coeffs == f.coeffs


@given(series(), series())
def test_float_arithmetic_tracks_exact(a, b):
    exact = a * b
    fl = a.to_float(192) * b.to_float(192)
    with gmpy2.context(precision=192):
        for (n, c), (m, d) in zip(exact.items(), fl.items()):
            assert n == m
            assert abs(gmpy2.mpfr(c.numerator) / c.denominator - d) <= 1e-45 * (1 + abs(d))


def test_float_coercion_keeps_precision():
    dom = big_float(256)
    x = dom.coerce(Fraction(1, 3))
    assert x.precision == 256
    assert abs(x * 3 - 1) < gmpy2.mpfr(2) ** -250
