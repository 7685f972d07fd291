"""Independent reference computations used as test oracles.

Each routine takes a different route from the library code: products instead
of Eisenstein identities, naive double loops instead of integer convolution,
mpmath instead of gmpy2, sympy instead of the in-house polynomial kernels.
"""
from __future__ import annotations

from fractions import Fraction

import mpmath
import sympy


def euler_delta(N: int) -> list[int]:
    """Coefficients of q * prod_{n>=1} (1 - q^n)^24 for exponents 0..N-1."""
    poly = [0] * N
    poly[0] = 1
    for n in range(1, N):
        for _ in range(24):
            for i in range(N - 1, n - 1, -1):
                poly[i] -= poly[i - n]
    return [0] + poly[:N - 1]


def naive_sigma(power: int, n: int) -> int:
    return sum(d ** power for d in range(1, n + 1) if n % d == 0)


def naive_eisenstein(k: int, N: int) -> list[Fraction]:
    bk = Fraction(sympy.bernoulli(k).p, sympy.bernoulli(k).q)
    c = Fraction(-2 * k) / bk
    return [Fraction(1)] + [c * naive_sigma(k - 1, n) for n in range(1, N)]


def naive_mul(a: list, b: list, n: int) -> list:
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        for j, y in enumerate(b[:n - i]):
            out[i + j] += x * y
    return out


def mp_eval(coeffs, valuation: int, tau: complex | mpmath.mpc, dps: int = 60):
    """Direct summation of sum c_n q^(valuation + n) with mpmath."""
    with mpmath.workdps(dps):
        q = mpmath.exp(2j * mpmath.pi * mpmath.mpmathify(tau))
        s = mpmath.mpf(0)
        for i, c in enumerate(coeffs):
            if isinstance(c, Fraction):
                c = mpmath.mpf(c.numerator) / c.denominator
            s += c * q ** (valuation + i)
        return s


def sympy_poly(coeffs: list[Fraction]):
    x = sympy.Symbol("x")
    return sympy.Poly(sum(sympy.Rational(c.numerator, c.denominator) * x ** i
                          for i, c in enumerate(coeffs)), x), x


def sympy_distinct_roots(coeffs, a, b) -> int:
    """Distinct real roots in the closed interval [a, b]."""
    p, _ = sympy_poly(coeffs)
    if p.degree() < 1:
        return 0
    sq = sympy.Poly(sympy.sqf_part(p.as_expr()), p.gens[0])
    return sq.count_roots(sympy.Rational(a), sympy.Rational(b))


def grid_sign_changes(coeffs, a, b, n: int = 100_000) -> int:
    """Sign changes (plus exact grid zeros) of a polynomial on a dense rational grid."""
    a, b = Fraction(a), Fraction(b)
    cs = [float(c) for c in coeffs]
    import numpy as np
    xs = np.linspace(float(a), float(b), n)
    vals = np.polyval(cs[::-1], xs)
    s = np.sign(vals)
    zeros = int(np.sum(s == 0))
    nz = s[s != 0]
    return int(np.sum(nz[1:] != nz[:-1])) + zeros


def pentagonal_delta_series(N: int):
    """Delta via Euler's pentagonal theorem: q * (sum (-1)^k q^{k(3k-1)/2})^24."""
    from serrezeros.qseries import QSeries
    eta = [0] * N
    k = 0
    while True:
        done = True
        for kk in (k, -k) if k else (0,):
            e = kk * (3 * kk - 1) // 2
            if e < N:
                eta[e] += (-1) ** (kk % 2)
                done = False
        if done:
            break
        k += 1
    return QSeries(eta, 0, N) ** 24 * QSeries([1], 1, N + 1)
