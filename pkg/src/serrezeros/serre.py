"""Serre derivative for the Fricke groups and cusp-order utilities."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import gmpy2

from .generators import ModularForm, check_level, e2p
from .qseries import CoefficientDomain, QSeries, TruncationError


@lru_cache(maxsize=64)
def e2p_series(p: int, N: int, domain: CoefficientDomain) -> QSeries:
    """E_{2,p} through O(q^N) in the requested domain (memoized)."""
    s = e2p(p, N).series
    return s if domain.is_exact else s.to_float(domain.precision_bits)


def serre_derivative(f: ModularForm, e2p_override: QSeries | None = None) -> ModularForm:
    """(D - (p+1) k E_{2,p} / 24) f, raising the weight by 2."""
    p = check_level(f.level)
    s = f.series
    need = max(s.truncation, 1)
    if e2p_override is None:
        e = e2p_series(p, need, s.domain)
    else:
        e = e2p_override
        if e.prec < need:
            raise TruncationError(
                f"E_2,{p} known to O(q^{e.prec}) but the form needs {need} terms", need)
    c = Fraction((p + 1) * f.weight, 24)
    out = s.derivative() - (e * s).scale(c)
    return ModularForm(f.weight + 2, p, out, f.real, f"d({f.label})", f.quasi)


def serre_iterate(f: ModularForm, n: int) -> ModularForm:
    if n < 1:
        raise ValueError("iteration count must be positive")
    g = f
    for _ in range(n):
        g = serre_derivative(g)
    if n > 1:
        g = g.with_series(g.series, f"d^{n}({f.label})")
    return g


def zero_threshold(precision_bits: int) -> float:
    return 2.0 ** (32 - precision_bits)


def ord_infinity(f: ModularForm | QSeries, threshold: float | None = None) -> int:
    """Order at the cusp: lowest exponent with a nonzero coefficient.

    For big-float series a coefficient counts as zero when it is below
    ``threshold`` times the largest stored magnitude.
    """
    s = f.series if isinstance(f, ModularForm) else f
    if s.is_zero():
        raise ValueError("identically zero series has no order at the cusp")
    if s.domain.is_exact:
        return s.valuation
    if threshold is None:
        threshold = zero_threshold(s.domain.precision_bits)
    scale = max(max(abs(c) for c in s.coeffs), gmpy2.mpfr(1))
    for n, c in s.items():
        if abs(c) > threshold * scale:
            return n
    raise ValueError("all coefficients below the zero threshold")
