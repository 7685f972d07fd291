from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from oracles import euler_delta, naive_eisenstein, naive_sigma
from serrezeros.generators import (ModularForm, UnsupportedLevelError, bernoulli, delta,
                                   divisor_sums, e2p, eisenstein, eisenstein_series,
                                   fricke_eisenstein, j_invariant)


@given(st.integers(1, 30).map(lambda n: 2 * n))
def test_bernoulli_matches_sympy(k):
    b = sympy.bernoulli(k)
    assert bernoulli(k) == Fraction(b.p, b.q)


@given(st.integers(0, 7), st.integers(2, 120))
def test_divisor_sieve(power, n_max):
    sig = divisor_sums(power, n_max)
    assert sig[0] == 0
    assert all(sig[n] == naive_sigma(power, n) for n in range(1, n_max))


@pytest.mark.parametrize("k", [2, 4, 6, 8, 10, 12, 14, 26, 60])
def test_eisenstein_against_naive_formula(k):
    assert list(eisenstein_series(k, 40).coeffs) == naive_eisenstein(k, 40)


def test_eisenstein_known_coefficients():
    assert list(eisenstein_series(4, 4).coeffs) == [1, 240, 2160, 6720]
    assert list(eisenstein_series(6, 4).coeffs) == [1, -504, -16632, -122976]
    assert list(eisenstein_series(2, 4).coeffs) == [1, -24, -72, -96]


def test_delta_matches_euler_product():
    N = 200
    want = euler_delta(N)
    d = delta(N).series
    assert d.valuation == 1
    assert [d.coefficient(n) for n in range(N)] == want


def test_j_invariant_coefficients():
    j = j_invariant(6).series
    assert j.valuation == -1
    assert [j.coefficient(n) for n in range(-1, 4)] == [1, 744, 196884, 21493760, 864299970]


def test_e2p_known_coefficients():
    assert list(e2p(2, 3).series.coeffs) == [1, -8, -40]
    assert list(e2p(3, 4).series.coeffs) == [1, -6, -18, -42]
    assert e2p(1, 10).series == eisenstein_series(2, 10)
    assert e2p(5, 4).quasi


def test_fricke_eisenstein_constant_term_and_first_coefficient():
    f = fricke_eisenstein(4, 2, 10)
    assert f.series.coefficient(0) == 1
    assert f.series.coefficient(1) == 48  # 240/(1+4)
    assert f.weight == 4 and f.level == 2


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("k", [4, 6, 8, 12])
def test_fricke_eisenstein_mixes_e_k_and_e_k_of_p_tau(p, k):
    N = 30
    f = fricke_eisenstein(k, p, N).series
    ek = naive_eisenstein(k, N)
    w = Fraction(p) ** (k // 2)
    for n in range(N):
        want = ek[n] + (w * ek[n // p] if n % p == 0 else 0)
        assert f.coefficient(n) == want / (1 + w)


def test_form_arithmetic_tracks_weight():
    e4, e6 = eisenstein(4, 20), eisenstein(6, 20)
    assert (e4 * e6).weight == 10
    assert (e4 / delta(21)).weight == -8
    assert (e4 ** 3).weight == 12
    assert (e4 ** 3 - e6 ** 2).weight == 12
    assert (e4 ** -1).weight == -4


def test_mixed_weight_addition_rejected():
    with pytest.raises(ValueError, match="weights 4 and 6"):
        eisenstein(4, 10) + eisenstein(6, 10)


def test_level_mismatch_and_unsupported_level():
    with pytest.raises(ValueError, match="level mismatch"):
        fricke_eisenstein(4, 2, 10) * fricke_eisenstein(4, 3, 10)
    with pytest.raises(UnsupportedLevelError):
        e2p(11, 10)
    with pytest.raises(ValueError):
        ModularForm(3, 1, eisenstein_series(4, 4))


def test_odd_or_small_weight_rejected():
    with pytest.raises(ValueError):
        eisenstein_series(5, 10)
    with pytest.raises(ValueError):
        fricke_eisenstein(2, 3, 10)
