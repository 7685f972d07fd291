"""Fundamental-domain geometry for the Fricke groups of level 1, 2, 3, 5, 7.

Arc 1 is ``tau = e^{i theta}/sqrt(p)`` for theta in [pi/2, alpha_p].  For
p in {5, 7} arc 2 is ``tau = -1/2 + e^{i(theta - alpha_p + beta_p)}/(2 sqrt(p))``
for theta in [alpha_p, alpha_p - beta_p + pi/2]; both arcs meet at rho_{p,1}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpc, mpfr

from .generators import check_level

CONST_BITS = 256
BOUNDARY_TOL = mpfr("1e-30", CONST_BITS)
GENUS = {1: 0, 2: 0, 3: 0, 5: 0, 7: 0}


@dataclass(frozen=True)
class EllipticPoint:
    label: str
    tau: mpc
    half_order: int
    exact: str


@dataclass(frozen=True)
class Arc:
    arc_id: int
    theta_lo: mpfr
    theta_hi: mpfr
    # endpoints evaluated by the scanner on this arc; rho_{p,1} belongs to arc 1 only
    endpoints: tuple


@dataclass(frozen=True)
class DomainSpec:
    level: int
    alpha: mpfr
    beta: mpfr | None
    alpha_over_pi: Fraction | None
    arcs: tuple
    genus: int
    elliptic_points: tuple

    def arc(self, arc_id: int) -> Arc:
        for a in self.arcs:
            if a.arc_id == arc_id:
                return a
        raise ValueError(f"level {self.level} has no arc {arc_id}")

    def elliptic(self, label: str) -> EllipticPoint:
        for e in self.elliptic_points:
            if e.label == label:
                return e
        raise ValueError(f"level {self.level} has no elliptic point {label!r}")

    def to_json(self) -> dict:
        digits = 40
        out = {
            "schema": "serre-zeros/1",
            "level": self.level,
            "genus": self.genus,
            "alpha": _fmt(self.alpha, digits),
            "alpha_exact": f"({self.alpha_over_pi.numerator}/{self.alpha_over_pi.denominator}) pi"
            if self.alpha_over_pi is not None else None,
            "beta": _fmt(self.beta, digits) if self.beta is not None else None,
            "arcs": [{"arc": a.arc_id, "theta_lo": _fmt(a.theta_lo, digits),
                      "theta_hi": _fmt(a.theta_hi, digits)} for a in self.arcs],
            "elliptic_points": [{"label": e.label, "re": _fmt(e.tau.real, digits),
                                 "im": _fmt(e.tau.imag, digits), "exact": e.exact,
                                 "half_order": e.half_order} for e in self.elliptic_points],
        }
        if self.level == 5:
            out["alpha_minus_beta"] = "(1/2) pi"
        elif self.level == 7:
            out["alpha_minus_beta"] = "(2/3) pi"
        return out


def _fmt(x, digits: int) -> str:
    return format(x, f".{digits}g")


@lru_cache(maxsize=None)
def domain_spec(p: int) -> DomainSpec:
    check_level(p)
    with gmpy2.context(precision=CONST_BITS):
        pi = gmpy2.const_pi()
        sp = gmpy2.sqrt(mpfr(p))
        half = mpfr(1) / 2
        if p in (1, 2, 3):
            a_pi = Fraction(p + 7, 12)
            alpha = pi * a_pi.numerator / a_pi.denominator
            beta = None
            rho = gmpy2.exp(mpc(0, alpha)) / sp
            rho_exact = {1: "-1/2 + (sqrt(3)/2) i", 2: "-1/2 + (1/2) i",
                         3: "-1/2 + (1/(2 sqrt(3))) i"}[p]
            e_rho = {1: 3, 2: 4, 3: 6}[p]
            pts = (EllipticPoint(f"i/sqrt({p})" if p > 1 else "i", mpc(0, 1) / sp, 2,
                                 f"i/sqrt({p})" if p > 1 else "i"),
                   EllipticPoint(f"rho_{p}", rho, e_rho, rho_exact))
        else:
            if p == 5:
                rho1 = mpc(mpfr(-2) / 5, mpfr(1) / 5)
                rho1_exact, diff, e1 = "-2/5 + (1/5) i", pi / 2, 2
            else:
                rho1 = mpc(mpfr(-5) / 14, gmpy2.sqrt(mpfr(3)) / 14)
                rho1_exact, diff, e1 = "-5/14 + (sqrt(3)/14) i", 2 * pi / 3, 3
            beta = gmpy2.phase(2 * sp * (rho1 + half))
            alpha = beta + diff
            a_pi = None
            rho2 = mpc(-half, 1 / (2 * sp))
            pts = (EllipticPoint(f"i/sqrt({p})", mpc(0, 1) / sp, 2, f"i/sqrt({p})"),
                   EllipticPoint(f"rho_{p},1", rho1, e1, rho1_exact),
                   EllipticPoint(f"rho_{p},2", rho2, 2, f"-1/2 + (1/(2 sqrt({p}))) i"))
        arcs = [Arc(1, pi / 2, alpha, ((pi / 2, pts[0]), (alpha, pts[1])))]
        if p in (5, 7):
            end = alpha - beta + pi / 2
            arcs.append(Arc(2, alpha, end, ((end, pts[2]),)))
    return DomainSpec(p, alpha, beta, a_pi, tuple(arcs), GENUS[p], pts)


def arc_interval(p: int, arc_id: int) -> tuple[mpfr, mpfr]:
    a = domain_spec(p).arc(arc_id)
    return a.theta_lo, a.theta_hi


def arc_phase(p: int, arc_id: int, theta) -> mpfr:
    """Angle phi with tau = centre + radius * e^{i phi}; the weight factor is e^{ik phi/2}."""
    theta = mpfr(theta, CONST_BITS)
    if arc_id == 1:
        return theta
    spec = domain_spec(p)
    with gmpy2.context(precision=CONST_BITS):
        return theta - spec.alpha + spec.beta


def arc_point(p: int, arc_id: int, theta, prec: int = 192, check: bool = True) -> mpc:
    spec = domain_spec(p)
    arc = spec.arc(arc_id)
    with gmpy2.context(precision=prec + 16):
        theta = mpfr(theta)
        if check:
            slack = mpfr(2) ** (20 - prec)
            if theta < arc.theta_lo - slack or theta > arc.theta_hi + slack:
                raise ValueError(f"theta={float(theta)} outside arc {arc_id} of level {p}")
        sp = gmpy2.sqrt(mpfr(p))
        if arc_id == 1:
            tau = gmpy2.exp(mpc(0, theta)) / sp
        else:
            tau = mpc(mpfr(-1) / 2, 0) + gmpy2.exp(mpc(0, arc_phase(p, 2, theta))) / (2 * sp)
    with gmpy2.context(precision=prec):
        return +tau


def classify_point(p: int, tau, tol=BOUNDARY_TOL) -> str:
    """'interior', 'boundary' (within tol of an edge) or 'exterior'."""
    check_level(p)
    with gmpy2.context(precision=CONST_BITS):
        tau = mpc(tau)
        if tau.imag <= 0:
            raise ValueError("point must lie in the upper half-plane")
        x = tau.real
        r1 = abs(tau) - 1 / gmpy2.sqrt(mpfr(p))
        half = mpfr(1) / 2
        rad2 = 1 / (2 * gmpy2.sqrt(mpfr(p)))
        # signed margins: >= 0 means the inequality holds
        if x <= tol:
            # closed left piece, -1/2 <= Re <= 0; Re = 0 itself is interior to F_p
            margins = [r1, x + half]
            if p in (5, 7):
                margins.append(abs(tau + half) - rad2)
            m = min(margins)
            if m < -tol:
                return "exterior"
            return "boundary" if m <= tol else "interior"
        # open right piece: |tau| > 1/sqrt p, Re < 1/2 (and outside the second circle)
        margins = [r1, half - x]
        if p in (5, 7):
            margins.append(abs(tau - half) - rad2)
        return "interior" if min(margins) > tol else "exterior"


def domain_contains(p: int, tau) -> bool:
    return classify_point(p, tau) != "exterior"


def find_elliptic(p: int, point, tol=mpfr("1e-20")) -> EllipticPoint:
    if isinstance(point, EllipticPoint):
        return point
    spec = domain_spec(p)
    if isinstance(point, str):
        return spec.elliptic(point)
    with gmpy2.context(precision=CONST_BITS):
        z = mpc(point)
        for e in spec.elliptic_points:
            if abs(z - e.tau) < tol:
                return e
    raise ValueError(f"{point} is not an elliptic point of level {p}")


def forced_elliptic_order(p: int, point, k: int) -> int:
    """Minimum order e - j at an elliptic point, k = 2j mod 2e with 1 <= j <= e."""
    e = find_elliptic(p, point).half_order
    for j in range(1, e + 1):
        if (k - 2 * j) % (2 * e) == 0:
            return e - j
    raise ValueError(f"odd weight {k}")


def valence_budget(p: int, k: int, ord_inf: int) -> Fraction:
    check_level(p)
    return Fraction((p + 1) * k, 24) - ord_inf


def rh_check(p: int) -> tuple[Fraction, Fraction]:
    spec = domain_spec(p)
    lhs = sum((1 - Fraction(1, e.half_order) for e in spec.elliptic_points), Fraction(0))
    rhs = Fraction(p + 1, 12) - 2 * spec.genus + 1
    return lhs, rhs
