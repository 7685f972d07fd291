"""Standard generating forms as exact q-series: E_k, E_2, Delta, j, E_{2,p}, and
level-p Fricke-invariant Eisenstein series."""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from math import comb

from .qseries import EXACT, QSeries

SUPPORTED_LEVELS = (1, 2, 3, 5, 7)
DEFAULT_TRUNCATION = 1024


class UnsupportedLevelError(ValueError):
    pass


def check_level(p: int) -> int:
    if p not in SUPPORTED_LEVELS:
        raise UnsupportedLevelError(f"level {p} not in {SUPPORTED_LEVELS}")
    return p


@dataclass(frozen=True)
class ModularForm:
    """A q-series tagged with weight and Fricke level.

    ``quasi`` marks quasi-modular inputs (E_2, E_{2,p}) which are valid series
    but carry no transformation law.
    """

    weight: int
    level: int
    series: QSeries
    real: bool = True
    label: str = ""
    quasi: bool = False

    def __post_init__(self):
        if self.weight % 2:
            raise ValueError(f"weight must be even, got {self.weight}")
        check_level(self.level)

    # arithmetic on forms keeps weight bookkeeping honest

    def _compatible(self, other: "ModularForm"):
        if self.level != other.level:
            raise ValueError(f"level mismatch: {self.level} vs {other.level}")

    def with_series(self, series: QSeries, label: str | None = None, **kw) -> "ModularForm":
        return replace(self, series=series, label=self.label if label is None else label, **kw)

    def __add__(self, other):
        if isinstance(other, ModularForm):
            self._compatible(other)
            if self.weight != other.weight:
                raise ValueError(f"cannot add weights {self.weight} and {other.weight}")
            return ModularForm(self.weight, self.level, self.series + other.series,
                               self.real and other.real, f"({self.label} + {other.label})",
                               self.quasi or other.quasi)
        if self.weight != 0:
            raise ValueError(f"cannot add a scalar to a weight-{self.weight} form")
        return self.with_series(self.series + other, f"({self.label} + {other})")

    __radd__ = __add__

    def __neg__(self):
        return self.with_series(-self.series, f"-{self.label}")

    def __sub__(self, other):
        if isinstance(other, ModularForm):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ModularForm):
            self._compatible(other)
            return ModularForm(self.weight + other.weight, self.level, self.series * other.series,
                               self.real and other.real, f"{self.label}*{other.label}",
                               self.quasi or other.quasi)
        return self.with_series(self.series.scale(other), f"{other}*{self.label}")

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ModularForm):
            self._compatible(other)
            return ModularForm(self.weight - other.weight, self.level,
                               self.series * other.series.inverse(),
                               self.real and other.real, f"{self.label}/{other.label}",
                               self.quasi or other.quasi)
        return self.with_series(self.series / other, f"{self.label}/{other}")

    def __rtruediv__(self, other):
        return (self ** -1) * other

    def __pow__(self, n: int):
        if n < 0:
            inv = ModularForm(-self.weight, self.level, self.series.inverse(), self.real,
                              f"{self.label}^-1", self.quasi)
            return inv ** (-n)
        return ModularForm(self.weight * n, self.level, self.series ** n, self.real,
                           f"{self.label}^{n}", self.quasi)

    def to_float(self, bits: int) -> "ModularForm":
        return self.with_series(self.series.to_float(bits))

    def to_json(self) -> dict:
        out = self.series.to_json()
        out.update(weight=self.weight, level=self.level, label=self.label,
                   real_coefficients=self.real)
        return out


def bernoulli(k: int) -> Fraction:
    """B_k from sum_{j=0}^{m} C(m+1, j) B_j = 0 (B_1 = -1/2 convention)."""
    if k < 2 or k % 2:
        raise ValueError(f"bernoulli takes an even k >= 2, got {k}")
    return _bernoulli_table(k)[k]


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple:
    bs = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(comb(m + 1, j) * bs[j] for j in range(m))
        bs.append(-s / (m + 1))
    return tuple(bs)


def divisor_sums(power: int, n_max: int) -> list[int]:
    """sigma_power(n) for 0 <= n < n_max by sieve (index 0 holds 0)."""
    sig = [0] * n_max
    for d in range(1, n_max):
        dp = d ** power
        for m in range(d, n_max, d):
            sig[m] += dp
    return sig


def eisenstein_series(k: int, N: int) -> QSeries:
    """Exact q-expansion of E_k through O(q^N)."""
    if k < 2 or k % 2:
        raise ValueError(f"Eisenstein weight must be even and >= 2, got {k}")
    c = Fraction(-2 * k) / bernoulli(k)
    sig = divisor_sums(k - 1, N)
    coeffs = [Fraction(1)] + [c * s for s in sig[1:]]
    return QSeries(coeffs, 0, N, EXACT)


def eisenstein(k: int, N: int = DEFAULT_TRUNCATION) -> ModularForm:
    return ModularForm(k, 1, eisenstein_series(k, N), True, f"E{k}", quasi=(k == 2))


def delta(N: int = DEFAULT_TRUNCATION) -> ModularForm:
    """Delta = (E4^3 - E6^2)/1728 through O(q^N)."""
    e4, e6 = eisenstein_series(4, N), eisenstein_series(6, N)
    return ModularForm(12, 1, (e4 ** 3 - e6 ** 2) / 1728, True, "Delta")


def j_invariant(N: int = DEFAULT_TRUNCATION) -> ModularForm:
    """j = E4^3/Delta through O(q^N)."""
    M = N + 2
    e4 = eisenstein_series(4, M)
    d = delta(M).series
    return ModularForm(0, 1, (e4 ** 3 * d.inverse()).truncate(N), True, "j")


def e2p(p: int, N: int = DEFAULT_TRUNCATION) -> ModularForm:
    """E_{2,p} = (p E_2(p tau) + E_2(tau))/(p + 1), quasi-modular of weight 2."""
    check_level(p)
    e2 = eisenstein_series(2, N)
    if p == 1:
        return ModularForm(2, 1, e2, True, "E2", quasi=True)
    scaled = eisenstein_series(2, -(-N // p)).substitute_power(p).truncate(N)
    return ModularForm(2, p, (scaled.scale(p) + e2) / (p + 1), True, f"E2p[{p}]", quasi=True)


def fricke_eisenstein(k: int, p: int, N: int = DEFAULT_TRUNCATION) -> ModularForm:
    """(E_k(tau) + p^(k/2) E_k(p tau)) / (1 + p^(k/2)), weight k for the Fricke group."""
    check_level(p)
    if p == 1:
        raise ValueError("fricke_eisenstein needs p > 1; use eisenstein at level 1")
    if k < 4 or k % 2:
        raise ValueError(f"weight must be even and >= 4, got {k}")
    ek = eisenstein_series(k, N)
    ekp = eisenstein_series(k, -(-N // p)).substitute_power(p).truncate(N)
    w = Fraction(p) ** (k // 2)
    return ModularForm(k, p, (ek + ekp.scale(w)) / (1 + w), True, f"FrickeE({k})[{p}]")
