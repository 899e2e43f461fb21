"""
ζ(s) と実二次指標の Dirichlet L 関数 L(s, χ_D) の実数引数での評価.

Every evaluation returns an ``LValue`` whose ``abs_error_bound`` covers
truncation and rounding, so downstream tolerances can be derived from it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from src.arith_util import character_table, is_fundamental

LOGGER = logging.getLogger(__name__)

EPS = float(np.finfo(np.float64).eps)
ZETA_MIN_S = 1.25
DEFAULT_ZETA_TERMS = 1000
DEFAULT_DIRECT_CUTOFF = 1_000_000
DEFAULT_PRIME_BOUND = 10_000


@dataclass(frozen=True)
class LValue:
    D: int
    s: float
    value: float
    abs_error_bound: float


def primes_up_to(bound: int) -> np.ndarray:
    """エラトステネスの篩"""
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def zeta_em(s: float, terms: int = DEFAULT_ZETA_TERMS) -> LValue:
    """Euler–Maclaurin evaluation of ζ(s), valid for every real s > 1."""
    if s <= 1:
        raise ValueError(f"zeta_em: s must exceed 1, got {s}")
    k = np.arange(1, terms, dtype=np.float64)
    K = float(terms)
    partial = float(np.sum(k**-s))
    value = (
        partial
        + K ** (1 - s) / (s - 1)
        + 0.5 * K**-s
        + s * K ** (-s - 1) / 12
        - s * (s + 1) * (s + 2) * K ** (-s - 3) / 720
    )
    remainder = s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * K ** (-s - 5) / 30240
    bound = 2 * remainder + 4 * EPS * value
    return LValue(D=1, s=s, value=value, abs_error_bound=bound)


def zeta(s: float, terms: int = DEFAULT_ZETA_TERMS) -> LValue:
    """ζ(s) for s ≥ ZETA_MIN_S"""
    if s < ZETA_MIN_S:
        raise ValueError(
            f"zeta: s={s} too close to 1 (minimum {ZETA_MIN_S}); use the s=1 limits"
        )
    return zeta_em(s, terms)


def L_direct(D: int, s: float, cutoff: int = DEFAULT_DIRECT_CUTOFF) -> LValue:
    """Σ_{k≤cutoff} χ_D(k)k^{−s} with the Abel-summation bound |D|·cutoff^{−s}."""
    if D == 1:
        return zeta(s)
    if s <= 1:
        raise ValueError(f"L_direct: s must exceed 1, got {s}")
    if cutoff < 1:
        raise ValueError(f"L_direct: cutoff must be positive, got {cutoff}")
    table = character_table(D)
    k = np.arange(1, cutoff + 1, dtype=np.int64)
    chi = table[k % abs(D)].astype(np.float64)
    value = float(np.sum(chi * k.astype(np.float64) ** -s))
    bound = abs(D) * float(cutoff) ** -s + 4 * EPS * math.log(cutoff + 1)
    return LValue(D=D, s=s, value=value, abs_error_bound=bound)


def L_euler(D: int, s: float, prime_bound: int = DEFAULT_PRIME_BOUND) -> LValue:
    """Euler product over p ≤ prime_bound."""
    if s <= 1:
        raise ValueError(f"L_euler: s must exceed 1, got {s}")
    p = primes_up_to(prime_bound)
    if D == 1:
        chi = np.ones(p.shape, dtype=np.float64)
    else:
        chi = character_table(D)[p % abs(D)].astype(np.float64)
    log_value = -float(np.sum(np.log1p(-chi * p.astype(np.float64) ** -s)))
    value = math.exp(log_value)
    tail = float(prime_bound) ** (1 - s) / (s - 1) / (1 - 2.0**-s)
    bound = value * math.expm1(tail) + 8 * EPS * value * len(p)
    return LValue(D=D, s=s, value=value, abs_error_bound=bound)


@lru_cache(maxsize=16384)
def L_at_1(D: int) -> LValue:
    """L(1, χ_D) by the finite sums of the class number formulas."""
    if D == 1:
        raise ValueError("L_at_1: D = 1 is the pole of ζ")
    if not is_fundamental(D):
        raise ValueError(f"L_at_1: {D} is not a fundamental discriminant")
    period = abs(D)
    table = character_table(D)
    a = np.arange(1, period, dtype=np.int64)
    chi = table[1:].astype(np.int64)
    if D < 0:
        weighted = int(np.sum(chi * a))
        value = -math.pi / period**1.5 * weighted
    else:
        logs = np.log(np.sin(np.pi * a.astype(np.float64) / period))
        value = -float(np.sum(chi * logs)) / math.sqrt(period)
    bound = 16 * EPS * period * max(1.0, abs(value))
    LOGGER.debug("L(1, chi_%d) = %.15g", D, value)
    return LValue(D=D, s=1.0, value=value, abs_error_bound=bound)
