import math
import random
from fractions import Fraction

import gmpy2
import mpmath
import pytest
from gmpy2 import mpc, mpfr
from hypothesis import given, strategies as st

from oracles import mp_eval
from serrezeros.arcs import (ArcZero, ScanSettings, TailEstimateError, arc_restriction,
                             derivative_identity_check, evaluate, evaluate_series,
                             interlacing_check, interlacing_from_zeros, realness_check,
                             sample_arc, scan_zeros, valence_audit, vanishing_order)
from serrezeros.formspec import parse_form_spec
from serrezeros.generators import delta, eisenstein, fricke_eisenstein
from serrezeros.geometry import arc_point, domain_spec
from serrezeros.qseries import QSeries
from serrezeros.serre import serre_derivative

N = 160
NF = 256  # level 7 needs about 200 terms at its lowest corner
E4, E6, DELTA = eisenstein(4, N), eisenstein(6, N), delta(N)


def j_at(tau):
    with gmpy2.context(precision=192):
        return evaluate(E4, tau).value ** 3 / evaluate(DELTA, tau).value


@given(st.floats(-0.5, 0.5), st.floats(0.35, 2.0))
def test_evaluation_matches_mpmath(x, y):
    tau = complex(x, y)
    got = evaluate(E4, tau, tol=1e-30)
    assert got.usable
    want = mp_eval(E4.series.coeffs, 0, tau, dps=60)
    assert abs(complex(got.value) - complex(want)) <= 1e-25 * max(1.0, abs(complex(want)))


def test_classical_values():
    assert abs(evaluate(E6, mpc(0, 1)).value) < 1e-50
    rho = domain_spec(1).elliptic("rho_1").tau
    assert abs(evaluate(E4, rho).value) < 1e-50
    i = mpc(0, 1)
    assert abs(1728 * evaluate(DELTA, i).value - evaluate(E4, i).value ** 3) < 1e-45
    assert abs(j_at(i) - 1728) < 1e-40


def test_weakly_holomorphic_evaluation():
    jq = (E4 ** 3 / DELTA).series
    tau = mpc(0, mpfr("1.2", 192))
    assert abs(evaluate(jq, tau).value - j_at(tau)) < 1e-30


def test_tail_flag_for_short_truncation():
    f = fricke_eisenstein(4, 7, 10)
    tau = domain_spec(7).elliptic("rho_7,2").tau
    res = evaluate(f, tau)
    assert not res.usable and res.required_N > 10
    theta = domain_spec(7).arc(2).theta_hi
    with pytest.raises(TailEstimateError) as info:
        arc_restriction(f, 2, theta)
    assert info.value.required > 10
    with pytest.raises(ValueError):
        evaluate(E4, mpc(0, -1))


def test_zero_series_evaluates_to_zero():
    assert evaluate_series(QSeries([], 0, 10), mpc(0, 1)).value == 0


@pytest.mark.parametrize("p", [1, 2, 3, 5, 7])
def test_realness_on_every_arc(p):
    f = E4 * E6 if p == 1 else fricke_eisenstein(8, p, NF)
    for arc in domain_spec(p).arcs:
        rep = realness_check(f, arc.arc_id, grid_size=64)
        assert rep.passed and rep.max_imag < 1e-40


def test_perturbed_series_fails_realness():
    s = E4.series + QSeries([Fraction(1, 1000)], 1, N)
    bad = E4.with_series(s)
    assert not realness_check(bad, 1, grid_size=64).passed


def test_e12_zero_maps_to_root_of_its_j_polynomial():
    zs = scan_zeros(eisenstein(12, N), 1)
    assert [z.parity for z in zs] == ["odd"]
    z = zs[0]
    assert z.bracket_width <= 1e-12
    assert abs(j_at(z.tau) - mpfr(432000) / 691) < 1e-8


def test_serre_of_e4e6_has_its_interior_zero_at_j_691_2():
    zs = scan_zeros(serre_derivative(E4 * E6), 1)
    interior = [z for z in zs if not z.endpoint]
    assert len(interior) == 1
    assert abs(j_at(interior[0].tau) - mpfr("691.2", 192)) < 1e-8


def test_endpoint_orders():
    zs = scan_zeros(E4 * E4 * E6, 1)
    orders = {z.label: z.order for z in zs if z.endpoint}
    assert orders == {"i": 1, "rho_1": 2}
    rho = domain_spec(1).elliptic("rho_1").tau
    assert vanishing_order((E4 ** 3).series, rho) == 3


def test_audit_reports_budget_and_forced_zeros():
    rep = valence_audit(serre_derivative(eisenstein(12, N)))
    assert rep.passed and rep.residual == 0
    assert rep.budget == Fraction(7, 6)
    assert rep.forced_elliptic_contribution == Fraction(7, 6)
    js = rep.to_json()
    assert js["schema"] == "serre-zeros/1" and js["residual"] == "0" and js["status"] == "pass"


def test_weakly_holomorphic_audit():
    rep = valence_audit(E4 / DELTA)
    assert rep.ord_inf == -1 and rep.budget == Fraction(1, 3) and rep.passed


def test_double_zero_is_flagged_not_hidden():
    f = parse_form_spec("(E4^3 - 1000*Delta)^2", 1, N)
    rep = valence_audit(f)
    assert rep.passed and rep.heuristic and rep.status == "pass-heuristic"
    (z,) = rep.zeros
    assert z.parity == "suspected-even" and z.weight == 2
    assert abs(j_at(z.tau) - 1000) < 1e-6


def test_close_simple_zeros_inside_one_grid_cell():
    f = parse_form_spec("(E4^3 - 1000*Delta)*(2*E4^3 - 2001*Delta)", 1, N)
    rep = valence_audit(f)
    assert rep.passed and not rep.heuristic
    assert [z.parity for z in rep.zeros] == ["odd", "odd"]


@pytest.mark.parametrize("c", ["2000", "-1000"])
def test_zero_off_the_arc_fails_the_audit(c):
    f = parse_form_spec(f"E4*(j - ({c}))", 1, N)
    rep = valence_audit(f)
    assert not rep.passed and not rep.hypothesis_holds
    assert rep.residual == 1
    assert any("residual" in d for d in rep.diagnostics)


def test_form_without_zeros_does_not_satisfy_hypothesis():
    rep = valence_audit(DELTA)
    assert rep.passed and not rep.hypothesis_holds


def test_coarse_grid_is_rejected():
    with pytest.raises(ValueError):
        scan_zeros(E4, 1, ScanSettings(grid_size=4))


def test_interlacing_detects_a_missing_derivative_zero():
    mk = lambda th: ArcZero(1, mpfr(th), mpc(0, 1), 0.0, "odd")
    zf = [mk(1.7), mk(1.8), mk(1.9)]
    rep = interlacing_from_zeros(1, zf, [mk(1.75)])
    assert rep.violations == 1 and len(rep.pairs) == 2
    assert rep.to_json()["violations"] == 1


@pytest.mark.parametrize("p,k", [(1, 24), (5, 12), (7, 12)])
def test_interlacing_holds(p, k):
    f = eisenstein(k, N) if p == 1 else fricke_eisenstein(k, p, NF)
    rep = interlacing_check(f)
    assert rep.violations == 0


@pytest.mark.parametrize("p", [1, 2, 5, 7])
def test_derivative_identity_second_order(p):
    f = eisenstein(12, N) if p == 1 else fricke_eisenstein(6, p, NF)
    rng = random.Random(p)
    for arc in domain_spec(p).arcs:
        lo, hi = float(arc.theta_lo), float(arc.theta_hi)
        th = rng.uniform(lo + 0.01, hi - 0.01)
        r1 = derivative_identity_check(f, arc.arc_id, th, 1e-4).residual
        r2 = derivative_identity_check(f, arc.arc_id, th, 5e-5).residual
        assert r1 < 1e-6
        assert 3.5 < r1 / r2 < 4.5


def test_sample_arc():
    pts = sample_arc(E4, 1, 9)
    assert len(pts) == 9
    assert abs(pts[-1][1]) < 1e-40  # E4 vanishes at rho
