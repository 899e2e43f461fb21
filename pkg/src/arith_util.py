"""
Exact integer arithmetic.

Factorization by trial division, the multiplicative functions μ, φ, σ_ℓ,
Kronecker/Jacobi symbols with the starred variants used by the theta
multiplier, squarefree splits n = f²d and the real quadratic characters ψ_n.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

LOGGER = logging.getLogger(__name__)

INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class Factorization:
    """符号付き整数の素因数分解"""

    value: int
    sign: int
    factors: tuple[tuple[int, int], ...]

    def reconstruct(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out


@dataclass(frozen=True)
class SquarefreeSplit:
    """n = d·f² with d squarefree and f = 2^q·w, w odd."""

    n: int
    d: int
    f: int
    q: int
    w: int


@dataclass(frozen=True)
class QuadChar:
    """ψ_n = (D/·) with D the discriminant of Q(√n); D = 1 for square n."""

    n: int
    D: int

    @property
    def is_trivial(self) -> bool:
        return self.D == 1

    def __call__(self, m: int) -> int:
        return kronecker(self.D, m)


def factorize(n: int) -> Factorization:
    """符号付き素因数分解 (|n| < 2^63)"""
    if n == 0:
        raise ValueError("factorize: zero has no factorization")
    if abs(n) > INT64_MAX:
        raise ValueError(f"factorize: |n| exceeds 2^63-1: {n}")
    sign = 1 if n > 0 else -1
    m = abs(n)
    factors: list[tuple[int, int]] = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        factors.append((m, 1))
    return Factorization(value=n, sign=sign, factors=tuple(factors))


def mobius(n: int) -> int:
    """Möbius μ(n)"""
    if n < 1:
        raise ValueError(f"mobius: n must be positive, got {n}")
    result = 1
    for _, e in factorize(n).factors:
        if e > 1:
            return 0
        result = -result
    return result


def sigma(ell: int, n: int) -> int:
    """Σ_{d|n} d^ℓ"""
    if n < 1:
        raise ValueError(f"sigma: n must be positive, got {n}")
    if ell < 0:
        raise ValueError(f"sigma: ell must be nonnegative, got {ell}")
    result = 1
    for p, e in factorize(n).factors:
        pl = p**ell
        result *= sum(pl**j for j in range(e + 1))
    return result


def sigma_real(ell: float, n: int) -> float:
    """σ_ℓ(n) for real ℓ."""
    result = 1.0
    for p, e in factorize(n).factors:
        pl = float(p) ** ell
        result *= sum(pl**j for j in range(e + 1))
    return result


def euler_phi(n: int) -> int:
    """Euler φ(n)"""
    if n < 1:
        raise ValueError(f"euler_phi: n must be positive, got {n}")
    result = 1
    for p, e in factorize(n).factors:
        result *= (p - 1) * p ** (e - 1)
    return result


def divisors(n: int) -> list[int]:
    """Positive divisors of n, ascending."""
    if n < 1:
        raise ValueError(f"divisors: n must be positive, got {n}")
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p**j for d in divs for j in range(e + 1)]
    return sorted(divs)


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def valuation2(n: int) -> int:
    """2-adic valuation v₂(n)"""
    if n == 0:
        raise ValueError("valuation2: zero")
    n = abs(n)
    return (n & -n).bit_length() - 1


def squarefree_split(n: int) -> SquarefreeSplit:
    fac = factorize(n)
    d = fac.sign
    f = 1
    for p, e in fac.factors:
        if e % 2:
            d *= p
        f *= p ** (e // 2)
    q = valuation2(f)
    return SquarefreeSplit(n=n, d=d, f=f, q=q, w=f >> q)


def kronecker(a: int, b: int) -> int:
    """Kronecker symbol (a|b)."""
    if b == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and b % 2 == 0:
        return 0
    result = 1
    if b < 0:
        b = -b
        if a < 0:
            result = -result
    v = 0
    while b % 2 == 0:
        b //= 2
        v += 1
    if v % 2 and a % 8 in (3, 5):
        result = -result
    # Jacobi symbol for odd b > 0
    a %= b
    while a:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                result = -result
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            result = -result
        a %= b
    return result if b == 1 else 0


def _check_star_denominator(d: int) -> None:
    if d % 2 == 0:
        raise ValueError(f"starred symbol needs odd denominator, got {d}")


def star_upper(c: int, d: int) -> int:
    """(c/d)^* := (c/|d|), with (0/±1)^* = 1."""
    _check_star_denominator(d)
    return kronecker(c, abs(d))


def star_lower(c: int, d: int) -> int:
    """(c/d)_*: (c/|d|) with a sign flip when c < 0 and d < 0; (0/±1)_* = ±1."""
    _check_star_denominator(d)
    if c == 0:
        if abs(d) == 1:
            return d
        return 0
    value = kronecker(c, abs(d))
    if c < 0 and d < 0:
        return -value
    return value


def fundamental_discriminant(n: int) -> int:
    """Discriminant of Q(√n); 1 for perfect squares."""
    d = squarefree_split(n).d
    if d == 1:
        return 1
    return d if d % 4 == 1 else 4 * d


def is_fundamental(D: int) -> bool:
    """D が基本判別式かどうか"""
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return mobius(abs(D)) != 0
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and mobius(abs(m)) != 0
    return False


@lru_cache(maxsize=8192)
def quad_char(n: int) -> QuadChar:
    """The character ψ_n of Q(√n), i.e. χ_D with D its fundamental discriminant."""
    if n == 0:
        raise ValueError("quad_char: n must be nonzero")
    return QuadChar(n=n, D=fundamental_discriminant(n))


def psi(n: int, m: int) -> int:
    """ψ_n(m)"""
    return quad_char(n)(m)


def T(s: float, chi: QuadChar | None, w: int) -> int | float:
    """T_s^χ(w) := Σ_{a|w} μ(a)χ(a)a^{s−1}σ_{2s−1}(w/a).

    s = 1 is evaluated in integers and returned as ``int``; ``chi=None`` is the
    trivial character.
    """
    if w < 1:
        raise ValueError(f"T: w must be positive, got {w}")
    exact = s == 1
    total: int | float = 0 if exact else 0.0
    for a in divisors(w):
        mu = mobius(a)
        if mu == 0:
            continue
        ch = 1 if chi is None else chi(a)
        if ch == 0:
            continue
        if exact:
            total += mu * ch * sigma(1, w // a)
        else:
            total += mu * ch * float(a) ** (s - 1) * sigma_real(2 * s - 1, w // a)
    return total


def T_derivative(s: float, chi: QuadChar | None, w: int) -> float:
    """∂/∂s T_s^χ(w)"""
    total = 0.0
    for a in divisors(w):
        mu = mobius(a)
        ch = 1 if chi is None else chi(a)
        if mu == 0 or ch == 0:
            continue
        la = math.log(a)
        for e in divisors(w // a):
            term = float(a) ** (s - 1) * float(e) ** (2 * s - 1)
            total += mu * ch * (la + 2 * math.log(e)) * term
    return total


@lru_cache(maxsize=4096)
def legendre_table(p: int) -> np.ndarray:
    """(x/p) for x = 0..p−1, p an odd prime."""
    table = -np.ones(p, dtype=np.int8)
    table[(np.arange(1, p, dtype=np.int64) ** 2) % p] = 1
    table[0] = 0
    table.flags.writeable = False
    return table


def jacobi_table(modulus: int, length: int) -> np.ndarray:
    """Jacobi symbol (x/modulus) for x = 0..length−1, modulus odd positive."""
    return jacobi_values(modulus, np.arange(length, dtype=np.int64))


def jacobi_values(modulus: int, x: np.ndarray) -> np.ndarray:
    """Jacobi symbol (x/modulus) elementwise over an integer array."""
    if modulus < 1 or modulus % 2 == 0:
        raise ValueError(f"jacobi_values: modulus must be odd positive, got {modulus}")
    values = np.ones(x.shape, dtype=np.int8)
    for p, e in factorize(modulus).factors:
        residues = x % p
        if e % 2:
            values *= legendre_table(p)[residues]
        else:
            values *= (residues != 0).astype(np.int8)
    return values


def smallest_prime_factors(bound: int) -> np.ndarray:
    """最小素因数の表 spf[0..bound]"""
    spf = np.arange(bound + 1, dtype=np.int64)
    for p in range(2, math.isqrt(bound) + 1):
        if spf[p] != p:
            continue
        block = spf[p * p :: p]
        np.putmask(block, block == np.arange(p * p, bound + 1, p), p)
    return spf


@lru_cache(maxsize=4096)
def character_table(D: int) -> np.ndarray:
    """χ_D(a) for a = 0..|D|−1 (one full period)."""
    period = abs(D)
    if period == 1:
        table = np.ones(1, dtype=np.int8)
        table.flags.writeable = False
        return table
    spf = smallest_prime_factors(period - 1).tolist()
    values = [0] * period
    values[0] = kronecker(D, 0)
    values[1] = 1
    for a in range(2, period):
        p = spf[a]
        if p == a:
            values[a] = kronecker(D, a)
        else:
            values[a] = values[p] * values[a // p]
    table = np.array(values, dtype=np.int8)
    table.flags.writeable = False
    LOGGER.debug("character table built for D=%d", D)
    return table
