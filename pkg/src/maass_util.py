"""
Fourier coefficients and point evaluation of the harmonic weak Maass form F_Θ
whose shadow is Θ³.

F_Θ(τ) = Σ_{n≥0} c⁺(n)qⁿ + 2y^{1/2} + Σ_{n≥1} c⁻(n)Γ(1/2; 4πny)q^{−n}
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from src.arith_util import (
    T,
    factorize,
    kronecker,
    quad_char,
    squarefree_split,
    star_lower,
    star_upper,
)
from src.common_util import EIGHTH_ROOTS, eighth_root, principal_sqrt, require_real
from src.kloosterman_util import LOG2, SquareBranch, Z_at_1, c_factor
from src.quadform_util import (
    class_number_imag,
    class_number_real,
    omega_units,
    pell_unit,
    r3_table,
)

LOGGER = logging.getLogger(__name__)

Family = Literal["holo_plus", "nonholo_minus", "r3"]
ConstantTerm = Literal["theorem2", "intro"]

SQRT_PI = math.sqrt(math.pi)
_EPS = 2.0**-52
_CF_TINY = 1e-300
_SERIES_SWITCH = 4.0
_MAX_ITER = 500


@dataclass(frozen=True)
class CoeffTable:
    """Coefficients a(n) of one family for 0 ≤ n ≤ n_max (n ≥ 1 for c⁻)."""

    family: Family
    entries: dict[int, complex | int] = field(repr=False)
    n_max: int

    def __getitem__(self, n: int) -> complex | int:
        return self.entries[n]

    def __contains__(self, n: object) -> bool:
        return n in self.entries


@dataclass(frozen=True)
class UpperHalfPoint:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not self.y > 0:
            raise ValueError(f"point must lie in the upper half-plane, got y={self.y}")

    @property
    def tau(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> UpperHalfPoint:
        return cls(z.real, z.imag)


@dataclass(frozen=True)
class GammaThetaMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant must be 1: {self}")
        parities = (self.a % 2, self.b % 2, self.c % 2, self.d % 2)
        if parities not in ((0, 1, 1, 0), (1, 0, 0, 1)):
            raise ValueError(f"matrix is not in the theta group: {self}")

    def act(self, tau: complex) -> complex:
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def automorphy(self, tau: complex) -> complex:
        """(cτ + d)^{1/2}, principal branch."""
        return principal_sqrt(self.c * tau + self.d)


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    error: float


@dataclass(frozen=True)
class FEvaluation:
    tau: UpperHalfPoint
    holomorphic: complex
    sqrt_term: float
    nonholomorphic: complex
    last_term: float

    @property
    def value(self) -> complex:
        return self.holomorphic + self.sqrt_term + self.nonholomorphic


@dataclass(frozen=True)
class ClassNumberCoefficient:
    """A coefficient written through h(D) and the unit data of Q(√±n).

    ``unit`` is log ε_D for a real field and ω for an imaginary one; for square n
    (D = 1) both ``h`` and ``unit`` are 0 and the log 2 value is used.
    """

    n: int
    D: int
    h: int
    unit: float
    value: float


# ---------------------------------------------------------------------------
# coefficients


def c_plus(
    n: int,
    constant_term: ConstantTerm = "theorem2",
    square_branch: SquareBranch = "tabulated",
) -> complex:
    """c⁺(n) = πe^{−πi/4}·conj(Z_{−n}(1)); half of that at n = 0 by default."""
    if n < 0:
        raise ValueError(f"c_plus: n must be nonnegative, got {n}")
    z = Z_at_1(-n, square_branch).value
    value = math.pi * EIGHTH_ROOTS[7] * z.conjugate()
    if n == 0 and constant_term == "theorem2":
        value *= 0.5
    return value


def c_minus(n: int) -> complex:
    """c⁻(n) = √π e^{−πi/4}·conj(Z_n(1))"""
    if n < 1:
        raise ValueError(f"c_minus: n must be positive, got {n}")
    return SQRT_PI * EIGHTH_ROOTS[7] * Z_at_1(n).value.conjugate()


def shadow_coefficient(n: int) -> float:
    """Coefficient of qⁿ in ξ_{1/2}F_Θ, namely −2√(πn)·c⁻(n)."""
    return -2.0 * math.sqrt(math.pi * n) * c_minus(n).real


def _divisor_ratio(n: int, chi_index: int) -> float:
    w = squarefree_split(n).w
    return float(T(1, quad_char(chi_index), w)) / w


def c_plus_class_number(
    n: int, round_tol: float = 1e-6, ambiguous_tol: float = 1e-3
) -> ClassNumberCoefficient:
    """c⁺(n) = −(6/π)·(2h(D) log ε_D / √D)·T₁(w)/w·c_{−n}, D the discriminant of Q(√n)."""
    if n < 1:
        raise ValueError(f"c_plus_class_number: n must be positive, got {n}")
    ratio = _divisor_ratio(-n, n)
    D = quad_char(n).D
    if D == 1:
        return ClassNumberCoefficient(n, 1, 0, 0.0, -6 / math.pi * LOG2 * ratio)
    h = class_number_real(D, round_tol, ambiguous_tol)
    log_eps = pell_unit(D).log_eps
    L = 2 * h * log_eps / math.sqrt(D)
    value = -6 / math.pi * L * ratio * c_factor(-n)
    LOGGER.debug("c+(%d) via h(%d)=%d, log eps=%.15g", n, D, h, log_eps)
    return ClassNumberCoefficient(n, D, h, log_eps, value)


def c_minus_class_number(n: int) -> ClassNumberCoefficient:
    """c⁻(n) = −(6/π^{3/2})·(2πh(D)/(ω√|D|))·T₁(w)/w·c_n, D the discriminant of Q(√−n)."""
    if n < 1:
        raise ValueError(f"c_minus_class_number: n must be positive, got {n}")
    D = quad_char(-n).D
    h = class_number_imag(D)
    omega = omega_units(D)
    L = 2 * math.pi * h / (omega * math.sqrt(-D))
    value = -6 / math.pi**1.5 * L * _divisor_ratio(n, -n) * c_factor(n)
    return ClassNumberCoefficient(n, D, h, float(omega), value)


def coeff_table(
    family: Family,
    n_max: int,
    threads: int = 1,
    constant_term: ConstantTerm = "theorem2",
    square_branch: SquareBranch = "tabulated",
    realness_tol: float = 1e-10,
) -> CoeffTable:
    """Coefficient table for one family, computed with a thread pool."""
    if n_max < 0:
        raise ValueError(f"coeff_table: n_max must be nonnegative, got {n_max}")
    if family == "r3":
        return CoeffTable("r3", dict(enumerate(r3_table(n_max))), n_max)
    if family == "holo_plus":
        indices = list(range(0, n_max + 1))

        def compute(n: int) -> complex:
            return c_plus(n, constant_term, square_branch)

    elif family == "nonholo_minus":
        indices = list(range(1, n_max + 1))
        compute = c_minus
    else:
        raise ValueError(f"unknown coefficient family: {family}")

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        values = list(pool.map(compute, indices))
    entries: dict[int, complex | int] = {}
    for n, value in zip(indices, values, strict=True):
        entries[n] = require_real(value, realness_tol, f"{family}[{n}]")
    LOGGER.debug("coeff_table(%s, %d) built", family, n_max)
    return CoeffTable(family, entries, n_max)


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    return factorize(p).factors == ((p, 1),)


def hecke_Tp2(
    table: CoeffTable, p: int, half_weight_k: int, n_max_out: int | None = None
) -> CoeffTable:
    """T(p²) on weight k + 1/2 coefficients.

    a′(n) = a(p²n) + ((−1)^k n | p)p^{k−1}a(n) + p^{2k−1}a(n/p²)
    """
    if not _is_odd_prime(p):
        raise ValueError(f"hecke_Tp2: p must be an odd prime, got {p}")
    if half_weight_k not in (0, 1):
        raise ValueError(f"hecke_Tp2: half_weight_k must be 0 or 1, got {half_weight_k}")
    k = half_weight_k
    pp = p * p
    if n_max_out is None:
        n_max_out = table.n_max // pp
    if pp * n_max_out > table.n_max:
        raise ValueError(
            f"hecke_Tp2: table up to {table.n_max} cannot cover p^2*{n_max_out}"
        )
    middle = p ** (k - 1)
    last = p ** (2 * k - 1)
    start = 0 if 0 in table else 1
    entries: dict[int, complex | int] = {}
    for n in range(start, n_max_out + 1):
        value = table[pp * n] + kronecker((-1) ** k * n, p) * middle * table[n]
        if n % pp == 0 and n // pp in table:
            value += last * table[n // pp]
        entries[n] = value
    return CoeffTable(table.family, entries, n_max_out)


# ---------------------------------------------------------------------------
# theta function and multiplier


def nu_theta(A: GammaThetaMatrix) -> complex:
    """Θ の乗法子 ν_Θ(A)"""
    if A.b % 2:
        return star_upper(A.d, A.c) * eighth_root(-A.c)
    return star_lower(A.c, A.d) * eighth_root(A.d - 1)


def theta_eval(tau: UpperHalfPoint, cutoff: int = 40) -> SeriesValue:
    """Θ(τ) = 1 + 2Σ_{n≤cutoff} e^{2πin²τ}"""
    if cutoff < 1:
        raise ValueError(f"theta_eval: cutoff must be positive, got {cutoff}")
    n2 = np.arange(1, cutoff + 1, dtype=np.float64) ** 2
    turns = np.mod(n2 * tau.x, 1.0)
    terms = np.exp(-2 * np.pi * n2 * tau.y) * np.exp(2j * np.pi * turns)
    value = 1 + 2 * complex(np.sum(terms))
    error = 4 * math.exp(-2 * math.pi * tau.y * cutoff**2)
    return SeriesValue(value, error)


def theta_cubed_eval(tau: UpperHalfPoint, cutoff: int = 40) -> SeriesValue:
    theta = theta_eval(tau, cutoff)
    error = 3 * abs(theta.value) ** 2 * theta.error + theta.error**3
    return SeriesValue(theta.value**3, error)


def theta_half(tau: complex, cutoff: int = 60) -> complex:
    """θ(τ) := Θ(τ/2) = Σ_n e^{πin²τ}"""
    return theta_eval(UpperHalfPoint.from_complex(tau / 2), cutoff).value


# ---------------------------------------------------------------------------
# incomplete gamma at a = 1/2


def _lower_series(x: float) -> float:
    """Σ_k x^k / (a(a+1)…(a+k)) at a = 1/2."""
    a = 0.5
    term = 1.0 / a
    total = term
    for k in range(1, _MAX_ITER):
        term *= x / (a + k)
        total += term
        if term < _EPS * total:
            return total
    raise RuntimeError(f"incomplete gamma series did not converge at x={x}")


def _upper_continued_fraction(x: float) -> float:
    """Lentz evaluation of e^x x^{−a} Γ(a; x) at a = 1/2."""
    a = 0.5
    b = x + 1.0 - a
    c = 1.0 / _CF_TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = b + an / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise RuntimeError(f"incomplete gamma continued fraction did not converge at x={x}")


def incomplete_gamma_half(x: float) -> float:
    """Γ(1/2; x) = √π·erfc(√x)"""
    if x < 0:
        raise ValueError(f"incomplete_gamma_half: x must be nonnegative, got {x}")
    if x == 0:
        return SQRT_PI
    if x < _SERIES_SWITCH:
        return SQRT_PI - math.sqrt(x) * math.exp(-x) * _lower_series(x)
    return math.sqrt(x) * math.exp(-x) * _upper_continued_fraction(x)


def incomplete_gamma_half_scaled(x: float) -> float:
    """e^x·Γ(1/2; x), finite for every x ≥ 0."""
    if x < 0:
        raise ValueError(f"incomplete_gamma_half_scaled: x must be nonnegative, got {x}")
    if x < _SERIES_SWITCH:
        return math.exp(x) * incomplete_gamma_half(x)
    return math.sqrt(x) * _upper_continued_fraction(x)


# ---------------------------------------------------------------------------
# F_Θ


def F_eval(
    tau: UpperHalfPoint,
    n_max: int,
    plus: CoeffTable | None = None,
    minus: CoeffTable | None = None,
    constant_term: ConstantTerm = "theorem2",
) -> FEvaluation:
    """Truncated F_Θ(τ) with the magnitude of the last included term."""
    if n_max < 1:
        raise ValueError(f"F_eval: n_max must be positive, got {n_max}")
    if plus is None:
        plus = coeff_table("holo_plus", n_max, constant_term=constant_term)
    if minus is None:
        minus = coeff_table("nonholo_minus", n_max)
    x, y = tau.x, tau.y
    holo = 0j
    nonholo = 0j
    last = 0.0
    for n in range(0, n_max + 1):
        turn = math.fmod(n * x, 1.0)
        decay = math.exp(-2 * math.pi * n * y)
        term = complex(plus[n]) * decay * complex(math.cos(2 * math.pi * turn), math.sin(2 * math.pi * turn))
        holo += term
        if n == 0:
            continue
        # Γ(1/2; 4πny)·|q|^{−n} = e^{−2πny}·(e^{4πny}Γ(1/2; 4πny))
        weight = incomplete_gamma_half_scaled(4 * math.pi * n * y) * decay
        back = complex(math.cos(2 * math.pi * turn), -math.sin(2 * math.pi * turn))
        nterm = complex(minus[n]) * weight * back
        nonholo += nterm
        if n == n_max:
            last = max(abs(term), abs(nterm))
    return FEvaluation(
        tau=tau,
        holomorphic=holo,
        sqrt_term=2 * math.sqrt(y),
        nonholomorphic=nonholo,
        last_term=last,
    )
