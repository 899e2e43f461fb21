"""
二次形式と類数

Reduced binary quadratic forms of negative discriminant, class numbers of
imaginary and real quadratic fields, Hurwitz class numbers, Pell fundamental
units and the sum-of-three-squares counts r(n).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from src.arith_util import (
    T,
    is_fundamental,
    is_square,
    quad_char,
    squarefree_split,
)
from src.common_util import PrecisionError
from src.lseries_util import L_at_1

LOGGER = logging.getLogger(__name__)

# Hurwitz class numbers are exact rationals in lowest terms
RationalVal = Fraction


@dataclass(frozen=True, order=True)
class ReducedForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_primitive(self) -> bool:
        return math.gcd(self.a, self.b, self.c) == 1


@dataclass(frozen=True)
class PellUnit:
    """ε_D = (x + y√D)/2 with x² − Dy² = norm ∈ {±4}."""

    D: int
    x: int
    y: int
    log_eps: float
    norm: int
    steps: int


def _check_negative_discriminant(Delta: int) -> None:
    if Delta >= 0 or Delta % 4 not in (0, 1):
        raise ValueError(f"discriminant must be negative and 0,1 mod 4: {Delta}")


def reduced_forms(Delta: int) -> list[ReducedForm]:
    """All reduced forms (primitive or not) of discriminant Delta."""
    _check_negative_discriminant(Delta)
    N = -Delta
    forms: list[ReducedForm] = []
    a = 1
    while 3 * a * a <= N:
        for b in range(-a + 1, a + 1):
            if (b - Delta) % 2:
                continue
            num = b * b + N
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            forms.append(ReducedForm(a, b, c))
        a += 1
    return sorted(forms)


def class_number_imag(Delta: int) -> int:
    """h(Δ) by counting primitive reduced forms."""
    if Delta >= 0 or not is_fundamental(Delta):
        raise ValueError(f"class_number_imag: {Delta} is not a negative fundamental discriminant")
    return sum(1 for f in reduced_forms(Delta) if f.is_primitive)


def omega_units(Delta: int) -> int:
    """Number of units in the order of discriminant Δ < 0."""
    if Delta >= 0:
        raise ValueError(f"omega_units: discriminant must be negative, got {Delta}")
    if Delta == -3:
        return 6
    if Delta == -4:
        return 4
    return 2


def _check_hurwitz_index(N: int) -> None:
    if N <= 0 or N % 4 not in (0, 3):
        raise ValueError(f"Hurwitz class number needs N > 0 with N = 0,3 mod 4: {N}")


def hurwitz_direct(N: int) -> RationalVal:
    """H(−N) by counting reduced forms with the 1/|Aut| weights."""
    _check_hurwitz_index(N)
    total = Fraction(0)
    for form in reduced_forms(-N):
        total += 1
        if form.b == 0 and form.a == form.c:
            total -= Fraction(1, 2)
        elif form.a == form.b == form.c:
            total -= Fraction(2, 3)
    return total


def fundamental_part(N: int) -> tuple[int, int]:
    """Write −N = Δ·f² with Δ a fundamental discriminant."""
    split = squarefree_split(-N)
    if split.d % 4 == 1:
        return split.d, split.f
    if split.f % 2:
        raise ValueError(f"−{N} is not a discriminant")
    return 4 * split.d, split.f // 2


def hurwitz_formula(N: int) -> RationalVal:
    """H(−N) = (2h(Δ)/ω)·T₁^{ψ_{−N}}(f)"""
    _check_hurwitz_index(N)
    Delta, f = fundamental_part(N)
    h = class_number_imag(Delta)
    omega = omega_units(Delta)
    t1 = T(1, quad_char(-N), f)
    return Fraction(2 * h, omega) * int(t1)


def hurwitz_table(n_max: int) -> list[RationalVal]:
    """Coefficients of −1/12 + Σ H(−n)qⁿ."""
    table = [Fraction(-1, 12)]
    for n in range(1, n_max + 1):
        table.append(hurwitz_direct(n) if n % 4 in (0, 3) else Fraction(0))
    return table


def _continued_fraction_unit(radicand: int, P: int, Q: int, norm) -> tuple[int, int, int]:
    """Walk the convergents p/q of (P + √radicand)/Q until norm(p, q) = ±1."""
    root = math.isqrt(radicand)
    p1, p2 = 1, 0
    q1, q2 = 0, 1
    limit = 4 * radicand + 100
    for step in range(1, limit):
        if Q <= 0:
            raise RuntimeError(f"continued fraction left the reduced range: Q={Q}")
        a = (P + root) // Q
        p1, p2 = a * p1 + p2, p1
        q1, q2 = a * q1 + q2, q1
        if norm(p1, q1) in (1, -1):
            return p1, q1, step
        P = a * Q - P
        Q = (radicand - P * P) // Q
    raise RuntimeError(f"no unit found for radicand {radicand}")


def pell_unit(D: int) -> PellUnit:
    """Fundamental unit of the real quadratic order of discriminant D."""
    if D <= 1 or is_square(D) or not is_fundamental(D):
        raise ValueError(f"pell_unit: {D} is not a positive non-square fundamental discriminant")
    if D % 4 == 0:
        m = D // 4
        p, q, steps = _continued_fraction_unit(m, 0, 1, lambda u, v: u * u - m * v * v)
        x, y = 2 * p, q
    else:
        k = (D - 1) // 4
        # units a + bω with ω = (1 + √D)/2 approximate (√D − 1)/2
        p, q, steps = _continued_fraction_unit(
            D, -1, 2, lambda u, v: u * u + u * v - k * v * v
        )
        x, y = 2 * p + q, q
    log_eps = math.log(x) + math.log1p(math.sqrt(D) * (y / x)) - math.log(2)
    unit = PellUnit(D=D, x=x, y=y, log_eps=log_eps, norm=x * x - D * y * y, steps=steps)
    LOGGER.debug("pell_unit(%d): x=%d y=%d steps=%d", D, x, y, steps)
    return unit


def class_number_real(
    D: int, round_tol: float = 1e-6, ambiguous_tol: float = 1e-3
) -> int:
    """h(D) = √D·L(1, χ_D)/(2 log ε_D), rounded."""
    unit = pell_unit(D)
    raw = math.sqrt(D) * L_at_1(D).value / (2 * unit.log_eps)
    h = round(raw)
    gap = abs(raw - h)
    if gap > ambiguous_tol or h < 1:
        raise PrecisionError(f"class_number_real({D}): ambiguous value {raw!r}")
    if gap > round_tol:
        LOGGER.warning("class_number_real(%d): %.3e from an integer", D, gap)
    return h


def r3_brute(n: int) -> int:
    """#{(x, y, z) : x² + y² + z² = n}"""
    if n < 0:
        raise ValueError(f"r3_brute: n must be nonnegative, got {n}")
    r = math.isqrt(n)
    count = 0
    for x in range(-r, r + 1):
        for y in range(-r, r + 1):
            rem = n - x * x - y * y
            if rem < 0 or not is_square(rem):
                continue
            count += 1 if rem == 0 else 2
    return count


def r3_hurwitz(n: int) -> int:
    """r(n) from the Hurwitz class number case split."""
    if n < 1:
        raise ValueError(f"r3_hurwitz: n must be positive, got {n}")
    if n % 4 == 0:
        return r3_hurwitz(n // 4)
    if n % 4 in (1, 2):
        value = 12 * hurwitz_formula(4 * n)
    elif n % 8 == 3:
        value = 24 * hurwitz_formula(n)
    else:
        return 0
    if value.denominator != 1:
        raise RuntimeError(f"r3_hurwitz({n}): non-integral value {value}")
    return int(value)


def r3_table(n_max: int) -> list[int]:
    """r(0..n_max) as coefficients of Θ³."""
    if n_max < 0:
        raise ValueError(f"r3_table: n_max must be nonnegative, got {n_max}")
    theta = np.zeros(n_max + 1, dtype=np.int64)
    theta[0] = 1
    for k in range(1, math.isqrt(n_max) + 1):
        theta[k * k] = 2
    square = np.convolve(theta, theta)[: n_max + 1]
    cube = np.convolve(square, theta)[: n_max + 1]
    return [int(v) for v in cube]
