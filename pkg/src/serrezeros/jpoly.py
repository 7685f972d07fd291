"""Exact level-1 certification through the j-invariant.

Every weight-k form of level 1 factors uniquely as
``E4^eps * E6^delta * Delta^m * P(j)`` with eps in {0,1,2}, delta in {0,1}.
The Serre derivative acts on the polynomial P by an explicit rule (six cases by
(eps, delta)); root locations of P in [0, 1728] correspond to zeros on the arc
|tau| = 1, and are certified with Sturm sequences over the rationals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .generators import ModularForm, delta, eisenstein_series, j_invariant
from .qseries import QSeries, TruncationError
from .serre import serre_derivative

J_RHO = Fraction(0)
J_I = Fraction(1728)


class DecompositionError(ValueError):
    pass


class RationalPolynomial:
    """Dense polynomial with Fraction coefficients in ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("RationalPolynomial is immutable")

    @classmethod
    def x(cls) -> "RationalPolynomial":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalPolynomial([other])
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*X^{i}")
        return " + ".join(terms)

    def __add__(self, other):
        other = _poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RationalPolynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_poly(other))

    def __rsub__(self, other):
        return _poly(other) - self

    def __mul__(self, other):
        other = _poly(other)
        if self.is_zero() or other.is_zero():
            return RationalPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        out = RationalPolynomial([1])
        for _ in range(n):
            out = out * self
        return out

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "RationalPolynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return RationalPolynomial(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        for i in range(dq, -1, -1):
            c = rem[i + len(other.coeffs) - 1] / lead
            quot[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return RationalPolynomial(quot), RationalPolynomial(rem[:len(other.coeffs) - 1])

    def __floordiv__(self, other):
        return self.divmod(_poly(other))[0]

    def __mod__(self, other):
        return self.divmod(_poly(other))[1]

    def monic(self) -> "RationalPolynomial":
        if self.is_zero():
            return self
        return RationalPolynomial([c / self.leading for c in self.coeffs])

    def integer_primitive(self) -> list[int]:
        """Coefficients scaled by a positive rational to coprime integers."""
        den = reduce(lambda a, c: a * c.denominator // math.gcd(a, c.denominator), self.coeffs, 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(math.gcd, ints, 0) or 1
        return [c // g for c in ints]

    def to_strings(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]


def _poly(x) -> RationalPolynomial:
    return x if isinstance(x, RationalPolynomial) else RationalPolynomial([x])


X = RationalPolynomial.x()


# -- integer polynomial kernels (ascending lists) -------------------------------

def _deg(a: list[int]) -> int:
    return len(a) - 1


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _content(a: list[int]) -> int:
    return reduce(math.gcd, a, 0)


def _pp(a: list[int]) -> list[int]:
    c = _content(a)
    if a[-1] < 0:
        c = -c
    return [x // c for x in a]


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b: lc(b)^(deg a - deg b + 1) a mod b."""
    r = list(a)
    db, lb = _deg(b), b[-1]
    e = _deg(a) - db + 1
    while r and _deg(r) >= db:
        lr = r[-1]
        shift = _deg(r) - db
        r = [x * lb for x in r]
        for j, c in enumerate(b):
            r[j + shift] -= lr * c
        _trim(r)
        e -= 1
    return [x * lb ** e for x in r] if e > 0 else r


def subresultant_gcd(a: RationalPolynomial, b: RationalPolynomial) -> RationalPolynomial:
    """Monic gcd over Q via the subresultant pseudo-remainder sequence."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    A, B = a.integer_primitive(), b.integer_primitive()
    if _deg(A) < _deg(B):
        A, B = B, A
    A, B = _pp(A), _pp(B)
    g = h = 1
    while True:
        d = _deg(A) - _deg(B)
        R = _trim(_prem(A, B))
        if not R:
            return RationalPolynomial(_pp(B)).monic()
        if _deg(R) == 0:
            return RationalPolynomial([1])
        A = B
        div = g * h ** d
        B = [x // div for x in R]
        g = A[-1]
        if d:
            h = g ** d // h ** (d - 1)


def squarefree_decomposition(p: RationalPolynomial) -> list[tuple[RationalPolynomial, int]]:
    """Yun's algorithm: p = lc * prod a_i^i with a_i square-free and coprime."""
    if p.degree < 1:
        return []
    out = []
    dp = p.derivative()
    a0 = subresultant_gcd(p, dp)
    b = p // a0
    c = dp // a0
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = subresultant_gcd(b, d)
        if a.degree > 0:
            out.append((a.monic(), i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(p: RationalPolynomial) -> RationalPolynomial:
    return (p // subresultant_gcd(p, p.derivative())).monic()


# -- Sturm ------------------------------------------------------------------------

def sturm_sequence(p: RationalPolynomial) -> list[RationalPolynomial]:
    """Sturm chain with each remainder rescaled by a positive constant."""
    seq = [RationalPolynomial(p.integer_primitive()),
           RationalPolynomial(p.derivative().integer_primitive())]
    while seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(RationalPolynomial(r.integer_primitive()))
    return seq


def _variations(seq, x) -> int:
    signs = [s for s in ((q(x) > 0) - (q(x) < 0) for q in seq) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _count_half_open(seq, lo, hi) -> int:
    """Distinct roots in (lo, hi] of the square-free head of ``seq``."""
    return _variations(seq, lo) - _variations(seq, hi)


@dataclass
class SturmResult:
    lo: Fraction
    hi: Fraction
    count: int
    intervals: list  # (lo, hi, multiplicity); lo == hi marks an exact rational root
    degree: int

    @property
    def total_multiplicity(self) -> int:
        return sum(m for *_, m in self.intervals)

    @property
    def all_roots_inside(self) -> bool:
        """Every complex root (with multiplicity) lies in [lo, hi]."""
        return self.total_multiplicity == self.degree

    def to_json(self) -> list[dict]:
        return [{"lo": f"{a.numerator}/{a.denominator}", "hi": f"{b.numerator}/{b.denominator}",
                 "multiplicity": m} for a, b, m in self.intervals]


def sturm_count(p: RationalPolynomial, a, b, refine_width=Fraction(1, 10 ** 12)) -> SturmResult:
    """Distinct real roots of p in [a, b], isolated in disjoint rational intervals."""
    if p.is_zero():
        raise ValueError("zero polynomial has no Sturm sequence")
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ValueError("need a < b")
    if p.degree == 0:
        return SturmResult(a, b, 0, [], 0)
    sqf = squarefree_part(p)
    seq = sturm_sequence(sqf)
    factors = squarefree_decomposition(p)

    found = []
    if sqf(a) == 0:
        found.append((a, a))

    def isolate(lo, hi, n):
        if n == 0:
            return
        if n == 1:
            found.append(_refine(sqf, lo, hi, refine_width))
            return
        mid = (lo + hi) / 2
        n1 = _count_half_open(seq, lo, mid)
        isolate(lo, mid, n1)
        isolate(mid, hi, n - n1)

    isolate(a, b, _count_half_open(seq, a, b))
    found.sort()
    intervals = []
    for lo, hi in found:
        mult = None
        for fac, i in factors:
            if (lo == hi and fac(lo) == 0) or (lo < hi and _count_half_open(sturm_sequence(fac), lo, hi)):
                mult = i
                break
        intervals.append((lo, hi, mult))
    return SturmResult(a, b, len(found), intervals, p.degree)


def _refine(sqf: RationalPolynomial, lo: Fraction, hi: Fraction, width: Fraction):
    """Shrink (lo, hi] holding one root of a square-free polynomial."""
    if sqf(hi) == 0:
        return (hi, hi)
    s_hi = sqf(hi) > 0
    while hi - lo > width:
        mid = (lo + hi) / 2
        v = sqf(mid)
        if v == 0:
            return (mid, mid)
        if (v > 0) == s_hi:
            hi = mid
        else:
            lo = mid
    return (lo, hi)


# -- j-decomposition ---------------------------------------------------------

@dataclass(frozen=True)
class JDecomposition:
    epsilon: int
    delta: int
    m: int
    poly: RationalPolynomial

    @property
    def weight(self) -> int:
        return 4 * self.epsilon + 6 * self.delta + 12 * self.m

    def to_json(self) -> dict:
        return {"epsilon": self.epsilon, "delta": self.delta, "m": self.m,
                "poly": self.poly.to_strings()}


_WEIGHT_PAIRS = {0: (0, 0), 2: (2, 1), 4: (1, 0), 6: (0, 1), 8: (2, 0), 10: (1, 1)}


def weight_triple(k: int) -> tuple[int, int, int]:
    if k % 2:
        raise ValueError(f"odd weight {k}")
    eps, dl = _WEIGHT_PAIRS[k % 12]
    return eps, dl, (k - 4 * eps - 6 * dl) // 12


def expected_degree(k: int, ord_inf: int) -> int:
    """deg P_f = m - ord_inf(f), since E4, E6 are units at the cusp and j ~ 1/q."""
    return weight_triple(k)[2] - ord_inf


def decompose(f: ModularForm, check_terms: int = 16) -> JDecomposition:
    if f.level != 1:
        raise DecompositionError("j-decomposition is implemented for level 1 only")
    s = f.series
    if not s.domain.is_exact:
        raise DecompositionError("decompose needs exact coefficients")
    eps, dl, m = weight_triple(f.weight)
    if s.is_zero():
        return JDecomposition(eps, dl, m, RationalPolynomial())
    deg = expected_degree(f.weight, s.valuation)
    if deg < 0:
        raise DecompositionError(
            f"order {s.valuation} at the cusp exceeds m={m}: not a weight-{f.weight} form")
    need = m + 1 + max(8, min(check_terms, s.prec - m - 1))
    if s.prec < need:
        raise TruncationError(f"decompose needs f through O(q^{need}), have O(q^{s.prec})", need)
    L = need
    s = s.truncate(L)
    M = L + abs(m) + deg + 4
    g = s
    if eps:
        g = g * eisenstein_series(4, M).inverse() ** eps
    if dl:
        g = g * eisenstein_series(6, M).inverse()
    if m:
        dlt = delta(M + 1).series
        g = g * (dlt.inverse() ** m if m > 0 else dlt ** (-m))
    j = j_invariant(g.prec + deg + 2).series
    powers = [None] * (deg + 1)
    powers[0] = QSeries([1], 0, g.prec)
    for e in range(1, deg + 1):
        powers[e] = powers[e - 1] * j
    coeffs = [Fraction(0)] * (deg + 1)
    for e in range(deg, -1, -1):
        c = g.coefficient(-e)
        coeffs[e] = c
        if c:
            g = g - powers[e].scale(c)
    if not g.is_zero():
        raise DecompositionError(
            f"nonzero residual at q^{g.valuation} after extracting P: "
            "form is not modular of the declared weight, or truncation is too short")
    return JDecomposition(eps, dl, m, RationalPolynomial(coeffs))


def reconstruct(d: JDecomposition, N: int) -> QSeries:
    """E4^eps E6^delta Delta^m P(j) through O(q^N)."""
    deg = max(d.poly.degree, 0)
    M = N + abs(d.m) + deg + 4
    out = QSeries([1], 0, M)
    if d.epsilon:
        out = out * eisenstein_series(4, M) ** d.epsilon
    if d.delta:
        out = out * eisenstein_series(6, M)
    if d.m:
        dlt = delta(M + 1).series
        out = out * (dlt ** d.m if d.m > 0 else dlt.inverse() ** (-d.m))
    j = j_invariant(M + deg).series
    pj = QSeries([], 0, M + deg)
    jp = QSeries([1], 0, M + deg)
    for c in d.poly.coeffs:
        if c:
            pj = pj + jp.scale(c)
        jp = jp * j
    return (out * pj).truncate(N)


def serre_poly(d: JDecomposition) -> JDecomposition:
    """Decomposition of the Serre derivative, from Ramanujan's identities
    d(E4) = -E6/3, d(E6) = -E4^2/2, d(Delta) = 0, D j = -(E6/E4) j."""
    P, dP = d.poly, d.poly.derivative()
    e, dl, m = d.epsilon, d.delta, d.m
    third = Fraction(1, 3)
    if dl == 0:
        base = -P * Fraction(e, 3) - X * dP
        if e == 0:
            return JDecomposition(2, 1, m - 1, -dP)
        if e == 1:
            return JDecomposition(0, 1, m, base)
        return JDecomposition(1, 1, m, base)
    if e == 0:
        return JDecomposition(2, 0, m, -(X - 1728) * dP - P * Fraction(1, 2))
    base = (X - 1728) * (-P * (third * e) - X * dP) - X * P * Fraction(1, 2)
    if e == 1:
        return JDecomposition(0, 0, m + 1, base)
    return JDecomposition(1, 0, m + 1, base)


# -- certification ----------------------------------------------------------------

@dataclass
class Certificate:
    form: JDecomposition
    derivative: JDecomposition
    form_roots: SturmResult | None
    derivative_roots: SturmResult | None
    oracle_agrees: bool
    certified: bool
    reason: str = ""
    prefactor_zeros: list = field(default_factory=list)

    def to_json(self) -> dict:
        d = self.derivative
        out = {"schema": "serre-zeros/1", **d.to_json(),
               "roots": self.derivative_roots.to_json() if self.derivative_roots else [],
               "certified": self.certified, "reason": self.reason,
               "oracle_agrees": self.oracle_agrees,
               "prefactor_zeros": [{"point": pt, "order": o} for pt, o in self.prefactor_zeros],
               "input": {**self.form.to_json(),
                         "roots": self.form_roots.to_json() if self.form_roots else []}}
        return out


def _roots_in_arc(P: RationalPolynomial) -> SturmResult | None:
    if P.degree < 1:
        return None if P.is_zero() else SturmResult(J_RHO, J_I, 0, [], 0)
    return sturm_count(P, J_RHO, J_I)


def certify_zeros_on_arc(f: ModularForm) -> Certificate:
    """Certify that all zeros of f and of its Serre derivative in F_1 lie on A_1."""
    d = decompose(f)
    ds = serre_poly(d)
    oracle = decompose(serre_derivative(f))
    agrees = ds == oracle
    f_roots = _roots_in_arc(d.poly)
    cert = Certificate(d, ds, f_roots, None, agrees, False)
    if not agrees:
        cert.reason = "serre_poly disagrees with decompose(serre_derivative(f))"
        return cert
    if d.poly.is_zero():
        cert.reason = "f is identically zero"
        return cert
    if d.epsilon == 0 and d.delta == 0 and d.poly.degree == 0:
        cert.reason = "hypothesis failed: f has no zeros in H"
        return cert
    if not f_roots.all_roots_inside:
        cert.reason = "hypothesis failed: P_f has roots outside [0, 1728]"
        return cert
    if ds.poly.is_zero():
        cert.reason = "Serre derivative vanishes identically"
        return cert
    cert.derivative_roots = _roots_in_arc(ds.poly)
    if not cert.derivative_roots.all_roots_inside:
        cert.reason = "P of the derivative has roots outside [0, 1728]"
        return cert
    if ds.epsilon:
        cert.prefactor_zeros.append(("rho_1", ds.epsilon))
    if ds.delta:
        cert.prefactor_zeros.append(("i", ds.delta))
    cert.certified = True
    return cert
