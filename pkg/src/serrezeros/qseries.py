"""Truncated Laurent series in q over exact rationals or big floats.

A :class:`QSeries` stores the coefficients of ``q^v, q^(v+1), ..., q^(P-1)``
densely, where ``v`` is the valuation and ``P`` the absolute precision: the
value is only known modulo ``O(q^P)``.  ``truncation`` is the number of
reliable terms counted from the valuation, ``P - v``.

Exact coefficients are :class:`fractions.Fraction`; big-float coefficients are
``gmpy2.mpfr`` values rounded to the domain's precision.
"""
from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from fractions import Fraction
from operator import mul
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpfr, mpq

SCHEMA = "serre-zeros/1"
EXACT_KIND = "exact-rational"
FLOAT_KIND = "big-float"
DEFAULT_PRECISION = 192


class DomainMismatchError(ValueError):
    pass


class TruncationError(ValueError):
    """Raised when a computation needs more reliable terms than are available."""

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


@dataclass(frozen=True)
class CoefficientDomain:
    kind: str
    precision_bits: int | None = None

    def __post_init__(self):
        if self.kind == EXACT_KIND:
            if self.precision_bits is not None:
                raise ValueError("exact-rational domain takes no precision")
        elif self.kind == FLOAT_KIND:
            if self.precision_bits is None or self.precision_bits < 64:
                raise ValueError("big-float precision must be at least 64 bits")
        else:
            raise ValueError(f"unknown coefficient domain {self.kind!r}")

    @property
    def is_exact(self) -> bool:
        return self.kind == EXACT_KIND

    def coerce(self, x):
        if self.is_exact:
            if isinstance(x, Fraction):
                return x
            if isinstance(x, int):
                return Fraction(x)
            if isinstance(x, type(mpq())):
                return Fraction(int(x.numerator), int(x.denominator))
            if isinstance(x, str):
                return Fraction(x)
            raise TypeError(f"cannot store {type(x).__name__} exactly")
        if isinstance(x, Fraction):
            return mpfr(mpq(x.numerator, x.denominator), self.precision_bits)
        if isinstance(x, str):
            return mpfr(x, self.precision_bits)
        return mpfr(x, self.precision_bits)

    def context(self):
        if self.is_exact:
            return contextlib.nullcontext()
        return gmpy2.context(precision=self.precision_bits)

    def describe(self) -> str:
        return self.kind if self.is_exact else f"{self.kind}:{self.precision_bits}"


EXACT = CoefficientDomain(EXACT_KIND)


def big_float(bits: int = DEFAULT_PRECISION) -> CoefficientDomain:
    return CoefficientDomain(FLOAT_KIND, bits)


# -- low level list kernels ---------------------------------------------------

def _common_denominator(xs: Sequence[Fraction]) -> int:
    d = 1
    for x in xs:
        den = x.denominator
        if den != 1 and d % den:
            d = d * den // math.gcd(d, den)
    return d


def _int_conv(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    rb = list(reversed(b))
    la, lb = len(a), len(b)
    out = []
    for k in range(n):
        lo = max(0, k - lb + 1)
        hi = min(k, la - 1)
        if lo > hi:
            out.append(0)
            continue
        start = lb - 1 - k + lo
        out.append(sum(map(mul, a[lo:hi + 1], rb[start:start + hi - lo + 1])))
    return out


def _conv(a: Sequence, b: Sequence, n: int, domain: CoefficientDomain) -> list:
    """First ``n`` coefficients of the product of two dense coefficient lists."""
    if not a or not b:
        return [domain.coerce(0)] * n
    if domain.is_exact:
        da, db = _common_denominator(a), _common_denominator(b)
        ia = [x.numerator * (da // x.denominator) for x in a]
        ib = [x.numerator * (db // x.denominator) for x in b]
        den = da * db
        return [Fraction(c, den) for c in _int_conv(ia, ib, n)]
    with domain.context():
        zero = mpfr(0)
        rb = list(reversed(b))
        la, lb = len(a), len(b)
        out = []
        for k in range(n):
            lo = max(0, k - lb + 1)
            hi = min(k, la - 1)
            if lo > hi:
                out.append(zero)
                continue
            start = lb - 1 - k + lo
            out.append(gmpy2.fsum(map(mul, a[lo:hi + 1], rb[start:start + hi - lo + 1])))
        return out


def _inverse_unit(a: Sequence, n: int, domain: CoefficientDomain) -> list:
    """Newton iteration for 1/a mod q^n, a[0] != 0."""
    with domain.context():
        one = domain.coerce(1)
        b = [one / a[0]]
        t = 1
        while t < n:
            t2 = min(2 * t, n)
            e = _conv(a[:t2], b, t2, domain)
            # e = 1 + O(q^t); b <- b - b*(e - 1)
            err = [domain.coerce(0)] * t + e[t:t2]
            corr = _conv(b, err, t2, domain)
            b = [(b[i] if i < t else 0) - corr[i] for i in range(t2)]
            if domain.is_exact:
                b = [Fraction(x) for x in b]
            t = t2
        return b


class QSeries:
    """Immutable truncated Laurent series ``sum_{n=v}^{P-1} c_n q^n + O(q^P)``."""

    __slots__ = ("domain", "valuation", "coeffs", "prec", "_cache")

    def __init__(self, coeffs: Iterable = (), valuation: int = 0,
                 prec: int | None = None, domain: CoefficientDomain = EXACT):
        cs = [domain.coerce(c) for c in coeffs]
        if prec is None:
            prec = valuation + len(cs)
        self._set(domain, valuation, cs, prec)

    @classmethod
    def _raw(cls, domain, valuation, coeffs, prec) -> "QSeries":
        obj = cls.__new__(cls)
        obj._set(domain, valuation, list(coeffs), prec)
        return obj

    def _set(self, domain, valuation, cs, prec):
        # fit the dense window [valuation, prec) then strip leading zeros
        if valuation + len(cs) > prec:
            cs = cs[:max(0, prec - valuation)]
        elif valuation + len(cs) < prec:
            cs = cs + [domain.coerce(0)] * (prec - valuation - len(cs))
        i = 0
        while i < len(cs) and cs[i] == 0:
            i += 1
        if i == len(cs):
            valuation, cs = 0, []
        else:
            valuation, cs = valuation + i, cs[i:]
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "valuation", valuation)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    # -- basic queries ---------------------------------------------------------

    @property
    def truncation(self) -> int:
        return self.prec - self.valuation

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading_coefficient(self):
        if not self.coeffs:
            raise ValueError("zero series has no leading coefficient")
        return self.coeffs[0]

    def coefficient(self, n: int):
        if n >= self.prec:
            raise TruncationError(f"coefficient of q^{n} beyond O(q^{self.prec})", n + 1)
        if self.is_zero() or n < self.valuation:
            return self.domain.coerce(0)
        return self.coeffs[n - self.valuation]

    def __getitem__(self, n: int):
        return self.coefficient(n)

    def items(self):
        """(exponent, coefficient) pairs of the stored window."""
        return [(self.valuation + i, c) for i, c in enumerate(self.coeffs)]

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.domain == other.domain and self.valuation == other.valuation
                and self.prec == other.prec and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.domain, self.valuation, self.prec, self.coeffs))

    def __repr__(self):
        terms = []
        for n, c in self.items()[:4]:
            terms.append(f"{c}*q^{n}")
        body = " + ".join(terms) if terms else "0"
        return f"QSeries({body} + O(q^{self.prec}), {self.domain.describe()})"

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other: "QSeries"):
        if self.domain != other.domain:
            raise DomainMismatchError(
                f"domain mismatch: {self.domain.describe()} vs {other.domain.describe()}")

    def _scalar_series(self, c) -> "QSeries":
        return QSeries._raw(self.domain, 0, [self.domain.coerce(c)], max(self.prec, 1))

    def __add__(self, other):
        if not isinstance(other, QSeries):
            other = self._scalar_series(other)
        self._check(other)
        prec = min(self.prec, other.prec)
        lo = min(self.valuation if self.coeffs else prec, other.valuation if other.coeffs else prec)
        lo = min(lo, prec)
        out = [self.domain.coerce(0)] * (prec - lo)
        with self.domain.context():
            for series in (self, other):
                for i, c in enumerate(series.coeffs):
                    n = series.valuation + i
                    if n >= prec:
                        break
                    out[n - lo] = out[n - lo] + c
        return QSeries._raw(self.domain, lo, out, prec)

    __radd__ = __add__

    def __neg__(self):
        with self.domain.context():
            return QSeries._raw(self.domain, self.valuation, [-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        if not isinstance(other, QSeries):
            other = self._scalar_series(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "QSeries":
        c = self.domain.coerce(c)
        with self.domain.context():
            return QSeries._raw(self.domain, self.valuation, [c * x for x in self.coeffs], self.prec)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        self._check(other)
        if self.is_zero() or other.is_zero():
            pa = self.prec if self.is_zero() else self.valuation
            pb = other.prec if other.is_zero() else other.valuation
            return QSeries._raw(self.domain, 0, [], pa + pb)
        t = min(self.truncation, other.truncation)
        v = self.valuation + other.valuation
        return QSeries._raw(self.domain, v, _conv(self.coeffs, other.coeffs, t, self.domain), v + t)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("pow exponent must be a nonnegative integer (invert first)")
        if n == 0:
            t = self.truncation if self.truncation > 0 else 1
            return QSeries._raw(self.domain, 0, [self.domain.coerce(1)], t)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> "QSeries":
        if self.is_zero():
            raise ZeroDivisionError("cannot invert the zero series")
        t = self.truncation
        return QSeries._raw(self.domain, -self.valuation,
                            _inverse_unit(self.coeffs, t, self.domain), t - self.valuation)

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.inverse()
        with self.domain.context():
            return self.scale(self.domain.coerce(1) / self.domain.coerce(other))

    def derivative(self) -> "QSeries":
        """D = q d/dq, i.e. (1/2 pi i) d/dtau on the q-expansion."""
        with self.domain.context():
            out = [(self.valuation + i) * c for i, c in enumerate(self.coeffs)]
        return QSeries._raw(self.domain, self.valuation, out, self.prec)

    def truncate(self, prec: int) -> "QSeries":
        if prec > self.prec:
            raise TruncationError(f"cannot extend O(q^{self.prec}) to O(q^{prec})", prec)
        return QSeries._raw(self.domain, self.valuation, self.coeffs, prec)

    def substitute_power(self, p: int) -> "QSeries":
        """Series in q^p, i.e. f(p tau) from f(tau)."""
        if p < 1:
            raise ValueError("substitution power must be positive")
        if self.is_zero():
            return QSeries._raw(self.domain, 0, [], self.prec * p)
        zero = self.domain.coerce(0)
        out = [zero] * ((len(self.coeffs) - 1) * p + 1)
        for i, c in enumerate(self.coeffs):
            out[i * p] = c
        return QSeries._raw(self.domain, self.valuation * p, out, self.prec * p)

    def to_float(self, bits: int = DEFAULT_PRECISION) -> "QSeries":
        dom = big_float(bits)
        key = ("float", bits)
        cached = self._cache.get(key)
        if cached is None:
            cached = QSeries._raw(dom, self.valuation, [dom.coerce(c) for c in self.coeffs], self.prec)
            self._cache[key] = cached
        return cached

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        if self.domain.is_exact:
            coeffs = [f"{c.numerator}/{c.denominator}" for c in self.coeffs]
        else:
            coeffs = [str(c) for c in self.coeffs]
        out = {"schema": SCHEMA, "domain": self.domain.kind,
               "valuation": self.valuation, "truncation": self.truncation, "coeffs": coeffs}
        if not self.domain.is_exact:
            out["precision_bits"] = self.domain.precision_bits
        return out

    @classmethod
    def from_json(cls, data: dict) -> "QSeries":
        if data["domain"] == EXACT_KIND:
            dom = EXACT
        else:
            dom = big_float(int(data["precision_bits"]))
        v = int(data["valuation"])
        return cls(data["coeffs"], v, v + int(data["truncation"]), dom)


# -- functional surface -------------------------------------------------------

def ring_ops(op: str, a: QSeries, b) -> QSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        if not isinstance(b, QSeries):
            raise TypeError("mul takes two series; use scalar-mul")
        return a * b
    if op == "scalar-mul":
        return a.scale(b)
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown ring op {op!r}")


def series_inv(a: QSeries) -> QSeries:
    return a.inverse()


def d_operator(a: QSeries) -> QSeries:
    return a.derivative()


def to_float(a: QSeries, bits: int = DEFAULT_PRECISION) -> QSeries:
    return a.to_float(bits)


def q_power(n: int, prec: int, domain: CoefficientDomain = EXACT) -> QSeries:
    """The monomial q^n known to O(q^prec)."""
    return QSeries([1], n, prec, domain)
