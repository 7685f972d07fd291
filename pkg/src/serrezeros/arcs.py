"""Evaluation of q-series in the upper half-plane and zero analysis on the
lower boundary arcs.

The arc restriction of a weight-k form is ``F(theta) = e^{ik phi/2} f(tau(theta))``
where ``phi`` is the angle about the arc's centre.  For real-coefficient
Fricke-modular forms F is real, so zeros on the arc show up as sign changes.

Tail model: after Horner summation of the first M terms, the truncation error
is bounded by ``8 * max(|a_n q^n| over the last 32 retained terms) * |q|/(1-|q|)``.
M is the smallest count for which that bound is below the requested tolerance
and the retained terms are no longer growing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

from .generators import ModularForm
from .geometry import arc_phase, arc_point, domain_spec, forced_elliptic_order
from .qseries import QSeries, TruncationError
from .serre import ord_infinity, serre_derivative
from .geometry import valence_budget

TAIL_WINDOW = 32
# grid minima below this fraction of the local maximum are refined before the threshold test
MINIMA_PRESCREEN = 1e-2
TAIL_SAFETY = 8.0
GUARD_BITS = 16


class TailEstimateError(TruncationError):
    pass


@dataclass(frozen=True)
class ScanSettings:
    grid_size: int = 2048
    refine_tol: float = 1e-12
    minima_threshold: float = 1e-8
    minima_window: int = 32
    eval_tol: float = 1e-30
    precision_bits: int = 192
    # |F| below zero_rel * sum|a_n q^n| counts as a zero at an elliptic endpoint
    zero_rel: float = 1e-20
    max_endpoint_order: int = 16


DEFAULT_SETTINGS = ScanSettings()


@dataclass(frozen=True)
class EvalResult:
    value: mpc
    tail_estimate: float
    tau: mpc
    terms: int
    log_scale: float
    usable: bool
    required_N: int | None = None

    @property
    def scale(self) -> float:
        """sum |a_n q^n| over the retained terms (conditioning of the sum)."""
        return math.exp(self.log_scale) if self.log_scale < 700 else math.inf


@dataclass(frozen=True)
class ArcZero:
    arc_id: int
    theta: mpfr
    tau: mpc
    bracket_width: float
    parity: str  # "odd", "suspected-even" or "endpoint"
    endpoint: bool = False
    order: int | None = None
    half_order: int = 1
    label: str | None = None
    bracket: tuple | None = None

    @property
    def weight(self) -> Fraction:
        """Contribution to the weighted zero count."""
        if self.endpoint:
            return Fraction(self.order, self.half_order)
        return Fraction(2) if self.parity == "suspected-even" else Fraction(1)


@dataclass
class ValenceReport:
    level: int
    weight: int
    label: str
    ord_inf: int
    budget: Fraction
    weighted_arc_count: Fraction
    forced_elliptic_contribution: Fraction
    zeros: list
    heuristic: bool = False
    diagnostics: list = field(default_factory=list)

    @property
    def residual(self) -> Fraction:
        return self.budget - self.weighted_arc_count - self.forced_elliptic_contribution

    @property
    def passed(self) -> bool:
        return self.residual == 0 and not self.diagnostics

    @property
    def hypothesis_holds(self) -> bool:
        """All zeros in F_p on A_p and at least one zero in H."""
        return self.passed and self.budget > 0

    @property
    def status(self) -> str:
        if not self.passed:
            return "fail"
        return "pass-heuristic" if self.heuristic else "pass"

    def to_json(self) -> dict:
        return {
            "schema": "serre-zeros/1",
            "label": self.label, "level": self.level, "weight": self.weight,
            "ord_infinity": self.ord_inf,
            "budget": str(self.budget),
            "weighted_arc_count": str(self.weighted_arc_count),
            "forced_elliptic_contribution": str(self.forced_elliptic_contribution),
            "residual": str(self.residual),
            "status": self.status,
            "heuristic": self.heuristic,
            "diagnostics": list(self.diagnostics),
            "zeros": [zero_row(z) for z in self.zeros],
        }


def zero_row(z: ArcZero, digits: int = 30) -> dict:
    return {
        "arc": z.arc_id,
        "theta": format(z.theta, f".{digits}g"),
        "re_tau": format(z.tau.real, f".{digits}g"),
        "im_tau": format(z.tau.imag, f".{digits}g"),
        "parity": z.parity,
        "bracket_width": f"{z.bracket_width:.3e}",
        "order": z.order,
        "half_order": z.half_order,
        "label": z.label,
    }


# -- evaluation ---------------------------------------------------------------

def _prepared(series: QSeries, prec: int):
    key = ("eval", prec)
    hit = series._cache.get(key)
    if hit is not None:
        return hit
    if series.domain.is_exact:
        fl = series.to_float(prec).coeffs
        logs = []
        for c in series.coeffs:
            if c == 0:
                logs.append(-math.inf)
            else:
                logs.append(math.log(abs(c.numerator)) - math.log(c.denominator))
    else:
        with gmpy2.context(precision=prec):
            fl = tuple(+c for c in series.coeffs)
        logs = [float(gmpy2.log(abs(c))) if c != 0 else -math.inf for c in series.coeffs]
    hit = (fl, logs)
    series._cache[key] = hit
    return hit


def evaluate_series(series: QSeries, tau, tol: float = 1e-30, prec: int = 192) -> EvalResult:
    """Horner summation of a truncated Laurent series at q = e^{2 pi i tau}."""
    coeffs, logs = _prepared(series, prec)
    with gmpy2.context(precision=prec + GUARD_BITS):
        tau = mpc(tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half-plane")
        q = gmpy2.exp(2 * gmpy2.const_pi() * mpc(0, 1) * tau)
    logr = -2 * math.pi * float(tau.imag)
    r = math.exp(logr)
    v = series.valuation
    L = len(coeffs)
    if L == 0:
        return EvalResult(mpc(0), 0.0, tau, 0, -math.inf, True)
    log_geo = logr - math.log1p(-r) + math.log(TAIL_SAFETY)
    log_tol = math.log(tol)
    terms = []
    M = L
    for i in range(L):
        terms.append(logs[i] + (v + i) * logr)
        n = i + 1
        if n >= min(TAIL_WINDOW, L) and n < L:
            window = terms[-TAIL_WINDOW:]
            if window[-1] <= window[0] and max(window) + log_geo <= log_tol:
                M = n
                break
    window = terms[max(0, M - TAIL_WINDOW):M]
    log_est = max(window) + log_geo
    top = max(terms)
    log_scale = top + math.log(sum(math.exp(t - top) for t in terms)) if top > -math.inf else -math.inf
    decreasing = window[-1] <= window[0] or M < TAIL_WINDOW
    usable = log_est <= log_tol and decreasing
    required = None
    if not usable:
        slope = (window[-1] - window[0]) / max(len(window) - 1, 1)
        if slope < 0:
            extra = int(math.ceil((log_est - log_tol) / -slope)) + TAIL_WINDOW
        else:
            extra = L
        required = v + L + extra
    with gmpy2.context(precision=prec + GUARD_BITS):
        s = mpc(coeffs[M - 1])
        for c in reversed(coeffs[:M - 1]):
            s = s * q + c
        if v:
            s = s * q ** v
    with gmpy2.context(precision=prec):
        s = +s
    rounding = M * 2.0 ** (4 - prec) * math.exp(min(log_scale, 700))
    tail = (math.exp(log_est) if log_est < 700 else math.inf) + rounding
    return EvalResult(s, tail, tau, M, log_scale, usable, required)


def evaluate(f: ModularForm | QSeries, tau, tol: float = 1e-30, prec: int = 192) -> EvalResult:
    series = f.series if isinstance(f, ModularForm) else f
    return evaluate_series(series, tau, tol, prec)


def _require(res: EvalResult, what: str) -> EvalResult:
    if not res.usable:
        raise TailEstimateError(
            f"{what}: tail estimate {res.tail_estimate:.3e} above tolerance; "
            f"needs truncation N >= {res.required_N}", res.required_N)
    return res


# -- arc restriction ----------------------------------------------------------

def arc_value_series(series: QSeries, weight: int, p: int, arc_id: int, theta,
                     tol: float = 1e-30, prec: int = 192, check: bool = True):
    """(F complex, EvalResult) for e^{i weight phi/2} * series(tau(theta))."""
    tau = arc_point(p, arc_id, theta, prec + GUARD_BITS, check=check)
    res = evaluate_series(series, tau, tol, prec)
    with gmpy2.context(precision=prec + GUARD_BITS):
        phi = arc_phase(p, arc_id, theta)
        factor = gmpy2.exp(mpc(0, weight * phi / 2))
        F = factor * res.value
    with gmpy2.context(precision=prec):
        return +F, res


def arc_value(f: ModularForm, arc_id: int, theta, tol: float = 1e-30, prec: int = 192,
              check: bool = True):
    return arc_value_series(f.series, f.weight, f.level, arc_id, theta, tol, prec, check)


def arc_restriction(f: ModularForm, arc_id: int, theta, tol: float = 1e-30,
                    prec: int = 192) -> mpfr:
    """Real part of F_k(f; theta); see :func:`arc_imaginary` for the realness residue."""
    F, res = arc_value(f, arc_id, theta, tol, prec)
    _require(res, f"arc {arc_id} theta={float(theta):.6f}")
    return F.real


def arc_imaginary(f: ModularForm, arc_id: int, theta, tol: float = 1e-30,
                  prec: int = 192) -> mpfr:
    F, res = arc_value(f, arc_id, theta, tol, prec)
    _require(res, f"arc {arc_id} theta={float(theta):.6f}")
    return F.imag


def _grid(lo, hi, n: int, prec: int, interior: bool):
    with gmpy2.context(precision=prec + GUARD_BITS):
        if interior:
            step = (hi - lo) / (n + 1)
            return [lo + step * i for i in range(1, n + 1)]
        step = (hi - lo) / (n - 1)
        return [lo + step * i for i in range(n)]


@dataclass(frozen=True)
class RealnessReport:
    arc_id: int
    max_imag: float
    max_tail: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_imag <= self.tol + self.max_tail


def realness_check(f: ModularForm, arc_id: int, grid_size: int = 512, tol: float = 1e-10,
                   prec: int = 192, eval_tol: float = 1e-30) -> RealnessReport:
    """max |Im F_k(f; theta)| over a closed theta-grid on the arc."""
    arc = domain_spec(f.level).arc(arc_id)
    worst, tail = 0.0, 0.0
    for th in _grid(arc.theta_lo, arc.theta_hi, grid_size, prec, interior=False):
        F, res = arc_value(f, arc_id, th, eval_tol, prec)
        _require(res, "realness grid")
        worst = max(worst, float(abs(F.imag)))
        tail = max(tail, res.tail_estimate)
    return RealnessReport(arc_id, worst, tail, tol)


# -- zero scanning ------------------------------------------------------------

def vanishing_order(series: QSeries, tau, settings: ScanSettings = DEFAULT_SETTINGS,
                    start: int = 0) -> int:
    """Order of vanishing at tau: first m with D^m f(tau) numerically nonzero."""
    g = series
    for _ in range(start):
        g = g.derivative()
    for m in range(start, settings.max_endpoint_order + 1):
        res = _require(evaluate_series(g, tau, settings.eval_tol, settings.precision_bits),
                       "vanishing order")
        if abs(res.value) > settings.zero_rel * res.scale + 2 * res.tail_estimate:
            return m
        g = g.derivative()
    raise ValueError(f"no nonzero derivative up to order {settings.max_endpoint_order}")


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def scan_zeros(f: ModularForm, arc_id: int = 1,
               settings: ScanSettings = DEFAULT_SETTINGS) -> list[ArcZero]:
    """Locate zeros of F_k(f; theta) on one arc of the lower boundary.

    Interior zeros come from sign changes on a uniform grid, refined by
    bisection; near-zero local minima without a sign change are reported as
    suspected even-order zeros; elliptic endpoints are tested directly and
    their order is read off successive derivatives.
    """
    if f.series.is_zero():
        raise ValueError("cannot scan the zero form")
    if settings.grid_size < 16:
        raise ValueError("grid_size must be at least 16")
    prec = settings.precision_bits
    p = f.level
    arc = domain_spec(p).arc(arc_id)
    thetas = _grid(arc.theta_lo, arc.theta_hi, settings.grid_size, prec, interior=True)

    def F(th):
        val, res = arc_value(f, arc_id, th, settings.eval_tol, prec)
        _require(res, f"level {p} arc {arc_id} theta={float(th):.8f}")
        return val.real

    vals = [F(th) for th in thetas]
    zeros: list[ArcZero] = []

    for i in range(len(vals) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0:
            zeros.append(_grid_zero(p, arc_id, thetas, vals, i, prec))
            continue
        if _sign(a) * _sign(b) < 0:
            zeros.append(_bisect(F, p, arc_id, thetas[i], thetas[i + 1], a, settings))
    if vals[-1] == 0:
        zeros.append(_grid_zero(p, arc_id, thetas, vals, len(vals) - 1, prec))

    mags = [abs(v) for v in vals]
    w = settings.minima_window
    for i in range(1, len(vals) - 1):
        a, b, c = vals[i - 1], vals[i], vals[i + 1]
        if b == 0 or not (_sign(a) == _sign(b) == _sign(c)):
            continue
        if mags[i] <= mags[i - 1] and mags[i] <= mags[i + 1]:
            local = max(mags[max(0, i - w):i + w + 1])
            if mags[i] < MINIMA_PRESCREEN * local:
                zeros.extend(_refine_minimum(F, p, arc_id, thetas[i - 1], thetas[i + 1], b,
                                             local, settings))

    for th, ell in arc.endpoints:
        val, res = arc_value(f, arc_id, th, settings.eval_tol, prec)
        _require(res, f"endpoint {ell.label}")
        if abs(val) <= settings.zero_rel * res.scale + 2 * res.tail_estimate:
            order = vanishing_order(f.series, ell.tau, settings, start=1)
            with gmpy2.context(precision=prec):
                tau = +ell.tau
            zeros.append(ArcZero(arc_id, th, tau, 0.0, "endpoint", True, order,
                                 ell.half_order, ell.label))
    zeros.sort(key=lambda z: z.theta)
    return zeros


def _refine_minimum(F, p, arc_id, lo, hi, f_mid, local, settings: ScanSettings) -> list:
    """Golden-section search for the minimum of |F| on [lo, hi].

    A dip below ``minima_threshold * local`` is a suspected even-order zero; a
    sign change met on the way means two close simple zeros instead.
    """
    prec = settings.precision_bits
    s = _sign(f_mid)
    with gmpy2.context(precision=prec + GUARD_BITS):
        g = (gmpy2.sqrt(mpfr(5)) - 1) / 2
        x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
        f1, f2 = F(x1), F(x2)
        while hi - lo > settings.refine_tol:
            for x, fx in ((x1, f1), (x2, f2)):
                if _sign(fx) != s:
                    flo = F(lo)
                    return [_bisect(F, p, arc_id, lo, x, flo, settings),
                            _bisect(F, p, arc_id, x, hi, fx, settings)]
            if s * f1 < s * f2:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - g * (hi - lo)
                f1 = F(x1)
            else:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + g * (hi - lo)
                f2 = F(x2)
        theta = (lo + hi) / 2
        width = float(hi - lo)
    fmin = min(abs(f1), abs(f2))
    if fmin >= settings.minima_threshold * local:
        return []
    return [ArcZero(arc_id, theta, arc_point(p, arc_id, theta, prec), width, "suspected-even",
                    bracket=(lo, hi))]


def _grid_zero(p, arc_id, thetas, vals, i, prec) -> ArcZero:
    left = vals[i - 1] if i > 0 else None
    right = vals[i + 1] if i + 1 < len(vals) else None
    parity = "odd"
    if left is not None and right is not None and _sign(left) == _sign(right):
        parity = "suspected-even"
    return ArcZero(arc_id, thetas[i], arc_point(p, arc_id, thetas[i], prec), 0.0, parity,
                   bracket=(thetas[i], thetas[i]))


def _bisect(F, p, arc_id, lo, hi, flo, settings: ScanSettings) -> ArcZero:
    prec = settings.precision_bits
    s_lo = _sign(flo)
    with gmpy2.context(precision=prec + GUARD_BITS):
        while hi - lo > settings.refine_tol:
            mid = (lo + hi) / 2
            fm = F(mid)
            if fm == 0:
                lo = hi = mid
                break
            if _sign(fm) == s_lo:
                lo = mid
            else:
                hi = mid
        theta = (lo + hi) / 2
        width = float(hi - lo)
    return ArcZero(arc_id, theta, arc_point(p, arc_id, theta, prec), width, "odd",
                   bracket=(lo, hi))


def scan_all_arcs(f: ModularForm, settings: ScanSettings = DEFAULT_SETTINGS) -> list[ArcZero]:
    out = []
    for arc in domain_spec(f.level).arcs:
        out.extend(scan_zeros(f, arc.arc_id, settings))
    return out


# -- valence audit ------------------------------------------------------------

def valence_audit(f: ModularForm, settings: ScanSettings = DEFAULT_SETTINGS,
                  zeros: list[ArcZero] | None = None) -> ValenceReport:
    """Compare the weighted count of located arc zeros with the valence budget."""
    p = f.level
    spec = domain_spec(p)
    if f.series.is_zero():
        raise ValueError("cannot audit the zero form")
    if zeros is None:
        zeros = scan_all_arcs(f, settings)
    ord_inf = ord_infinity(f)
    budget = valence_budget(p, f.weight, ord_inf)
    interior = Fraction(0)
    elliptic = Fraction(0)
    heuristic = False
    diagnostics = []
    seen = set()
    for z in zeros:
        if z.endpoint:
            forced = forced_elliptic_order(p, z.label, f.weight)
            if z.order < forced or (z.order - forced) % z.half_order:
                diagnostics.append(
                    f"order {z.order} at {z.label} inconsistent with forced order {forced}"
                    f" mod {z.half_order}")
            elliptic += z.weight
            seen.add(z.label)
        else:
            interior += z.weight
            heuristic = heuristic or z.parity == "suspected-even"
    for e in spec.elliptic_points:
        if e.label not in seen and forced_elliptic_order(p, e, f.weight) > 0:
            diagnostics.append(f"forced zero at {e.label} not detected")
    report = ValenceReport(p, f.weight, f.label, ord_inf, budget, interior, elliptic,
                           list(zeros), heuristic, diagnostics)
    if report.residual > 0:
        report.diagnostics.append(
            f"residual {report.residual}: zeros off the arcs, a missed even-order zero, "
            "or an insufficient grid")
    elif report.residual < 0:
        report.diagnostics.append(f"residual {report.residual}: over-count (numerical fault)")
    return report


# -- interlacing ----------------------------------------------------------------

@dataclass
class InterlacingReport:
    pairs: list  # (arc, theta_a, theta_b, theta of a derivative zero or None)
    cross_corner: list

    @property
    def violations(self) -> int:
        return sum(1 for *_, hit in self.pairs if hit is None)

    def to_json(self) -> dict:
        def fmt(x):
            return None if x is None else format(x, ".20g")
        return {
            "pairs": [{"arc": a, "theta_a": fmt(x), "theta_b": fmt(y), "derivative_zero": fmt(h)}
                      for a, x, y, h in self.pairs],
            "cross_corner": [{"theta_a": fmt(x), "theta_b": fmt(y), "derivative_zero": fmt(h)}
                             for x, y, h in self.cross_corner],
            "violations": self.violations,
        }


def interlacing_from_zeros(p: int, zeros_f: list[ArcZero],
                           zeros_df: list[ArcZero]) -> InterlacingReport:
    spec = domain_spec(p)
    by_arc = {a.arc_id: sorted((z.theta for z in zeros_f if z.arc_id == a.arc_id))
              for a in spec.arcs}
    d_interior = [z for z in zeros_df if not z.endpoint]

    def between(arc_id, lo, hi):
        for z in d_interior:
            if z.arc_id == arc_id and lo < z.theta < hi:
                return z.theta
        return None

    pairs = []
    for arc_id, ths in by_arc.items():
        for lo, hi in zip(ths, ths[1:]):
            pairs.append((arc_id, lo, hi, between(arc_id, lo, hi)))
    cross = []
    if len(spec.arcs) == 2 and by_arc[1] and by_arc[2]:
        lo, hi = by_arc[1][-1], by_arc[2][0]
        hit = between(1, lo, spec.alpha)
        if hit is None:
            hit = between(2, spec.alpha, hi)
        cross.append((lo, hi, hit))
    return InterlacingReport(pairs, cross)


def interlacing_check(f: ModularForm, settings: ScanSettings = DEFAULT_SETTINGS) -> InterlacingReport:
    zf = scan_all_arcs(f, settings)
    zdf = scan_all_arcs(serre_derivative(f), settings)
    return interlacing_from_zeros(f.level, zf, zdf)


# -- differential identity --------------------------------------------------------

@dataclass(frozen=True)
class IdentityCheck:
    theta: float
    h: float
    residual: float
    magnitude: float


def derivative_identity_check(f: ModularForm, arc_id: int, theta, h: float,
                              prec: int = 192, tol: float = 1e-40) -> IdentityCheck:
    """|central difference of F_k(f) - [(ik/2) F_k(f) - c/sqrt(p) F_{k+2}(Df)]|,
    with c = 2 pi on arc 1 and c = pi on arc 2."""
    p, k = f.level, f.weight
    with gmpy2.context(precision=prec + GUARD_BITS):
        theta = mpfr(theta)
        hh = mpfr(h)
        plus, r1 = arc_value(f, arc_id, theta + hh, tol, prec, check=False)
        minus, r2 = arc_value(f, arc_id, theta - hh, tol, prec, check=False)
        mid, r3 = arc_value(f, arc_id, theta, tol, prec, check=False)
        dmid, r4 = arc_value_series(f.series.derivative(), k + 2, p, arc_id, theta, tol, prec,
                                    check=False)
        for r in (r1, r2, r3, r4):
            _require(r, "identity check")
        lhs = (plus - minus) / (2 * hh)
        c = 2 * gmpy2.const_pi() if arc_id == 1 else gmpy2.const_pi()
        rhs = mpc(0, mpfr(k) / 2) * mid - c / gmpy2.sqrt(mpfr(p)) * dmid
        residual = float(abs(lhs - rhs))
        magnitude = float(abs(lhs))
    return IdentityCheck(float(theta), h, residual, magnitude)


def sample_arc(f: ModularForm, arc_id: int, n: int, settings: ScanSettings = DEFAULT_SETTINGS):
    """(theta, F(theta)) on a closed uniform grid, for plotting."""
    arc = domain_spec(f.level).arc(arc_id)
    out = []
    for th in _grid(arc.theta_lo, arc.theta_hi, n, settings.precision_bits, interior=False):
        val, res = arc_value(f, arc_id, th, settings.eval_tol, settings.precision_bits)
        _require(res, "plot sample")
        out.append((th, val.real))
    return out
