"""
Kloosterman sums with the theta multiplier and the Kloosterman zeta Z_n(s).

Two independent routes to Z_n(s):

* the truncated Dirichlet series Σ_c S(n;c)/c^{s+1/2} (``Z_series``), and
* the closed forms in L-values and divisor sums (``Zn_closed``, ``Z0_closed``),
  together with their s = 1 values (``Z_at_1``) and the limit assemblies that
  derive those values from the closed-form components.

The proof-side objects λ_Z, γ_c, Q_r and R̃_N are exposed so the bridging
identities between the two routes can be checked numerically.
"""

from __future__ import annotations

import cmath
import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np

from src.arith_util import (
    QuadChar,
    T,
    T_derivative,
    euler_phi,
    fundamental_discriminant,
    is_square,
    jacobi_values,
    kronecker,
    quad_char,
    squarefree_split,
    star_lower,
    star_upper,
    valuation2,
)
from src.common_util import (
    EIGHTH_ROOTS,
    PHASE,
    SeriesRangeError,
    eighth_root,
    strip_phase,
)
from src.lseries_util import DEFAULT_DIRECT_CUTOFF, L_at_1, L_direct, LValue, zeta_em

LOGGER = logging.getLogger(__name__)

Method = Literal["series", "closed_form", "s1_special", "limit_assembly"]
SquareBranch = Literal["tabulated", "limit"]

SERIES_MIN_S = 2.0
SERIES_MIN_CUTOFF = 100
R_TILDE_SERIES_TERMS = 60
ZETA_2 = math.pi**2 / 6
LOG2 = math.log(2.0)

_ROOTS = np.array(EIGHTH_ROOTS, dtype=np.complex128)


@dataclass(frozen=True)
class KloostermanSum:
    n: int
    c: int
    value: complex


@dataclass(frozen=True)
class ZetaValue:
    """A value of Z_n(s); every instance carries the phase e^{3πi/4}."""

    n: int
    s: float
    value: complex
    method: Method
    error_bound: float = 0.0
    trivial_character: bool = False

    @property
    def phase_residual(self) -> float:
        return abs(strip_phase(self.value).imag)

    @property
    def real_part(self) -> float:
        """value·e^{−3πi/4}, real by construction."""
        return strip_phase(self.value).real


# ---------------------------------------------------------------------------
# multiplier system and sums


def lam(d: int, c: int) -> complex:
    """λ(d, c)"""
    if c < 1:
        raise ValueError(f"lambda: c must be positive, got {c}")
    if c % 2 and d % 2 == 0:
        return eighth_root(-c) * star_upper(d, c)
    if c % 2 == 0 and d % 2:
        return eighth_root(d - 1) * star_lower(c, d)
    return 0j


def lambda_cubed_conj(c: int) -> np.ndarray:
    """conj(λ(d, c))³ for d = 0..2c−1."""
    d = np.arange(2 * c, dtype=np.int64)
    out = np.zeros(2 * c, dtype=np.complex128)
    if c % 2:
        even = d[0::2]
        out[0::2] = _ROOTS[(3 * c) % 8] * jacobi_values(c, even)
        return out
    odd = d[1::2]
    r = valuation2(c)
    core = c >> r
    signs = jacobi_values(core, odd).astype(np.int64)
    if core % 4 == 3:
        # reciprocity for (core/d) with both odd and positive
        signs = np.where(odd % 4 == 3, -signs, signs)
    if r % 2:
        signs = np.where((odd % 8 == 3) | (odd % 8 == 5), -signs, signs)
    out[1::2] = _ROOTS[(-3 * (odd - 1)) % 8] * signs
    return out


def S(n: int, c: int) -> KloostermanSum:
    """S(n;c) = Σ_{0≤d<2c} conj(λ(d,c))³ e^{πidn/c}"""
    if c < 1:
        raise ValueError(f"S: c must be positive, got {c}")
    weights = lambda_cubed_conj(c)
    d = np.arange(2 * c, dtype=np.int64)
    phases = np.exp(1j * np.pi * ((d * n) % (2 * c)) / c)
    value = complex(np.sum(weights * phases))
    return KloostermanSum(n=n, c=c, value=value)


def _fill_columns(ns: np.ndarray, cs: range, out: np.ndarray) -> None:
    for c in cs:
        weights = lambda_cubed_conj(c)
        if c % 2:
            spectrum = np.fft.fft(weights[0::2])
            out[:, c - 1] = spectrum[(-ns) % c]
        else:
            spectrum = np.fft.fft(weights[1::2])
            twist = np.exp(1j * np.pi * (ns % (2 * c)) / c)
            out[:, c - 1] = twist * spectrum[(-ns) % c]


def S_batch(ns: Sequence[int], cutoff: int, threads: int = 1) -> np.ndarray:
    """S(n;c) for every n in ``ns`` and 1 ≤ c ≤ cutoff, shape (len(ns), cutoff).

    One FFT per modulus over the nonvanishing half of the d-range.
    """
    if cutoff < 1:
        raise ValueError(f"S_batch: cutoff must be positive, got {cutoff}")
    n_arr = np.asarray(list(ns), dtype=np.int64)
    out = np.zeros((len(n_arr), cutoff), dtype=np.complex128)
    workers = max(1, int(threads))
    if workers == 1:
        _fill_columns(n_arr, range(1, cutoff + 1), out)
        return out
    # stride the moduli so every worker gets a similar share of large c
    chunks = [range(1 + k, cutoff + 1, workers) for k in range(workers)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for future in [pool.submit(_fill_columns, n_arr, ch, out) for ch in chunks]:
            future.result()
    return out


def S0_closed(c: int) -> complex:
    """S(0; c) in closed form: nonzero only when the odd part of c is a square."""
    if c < 1:
        raise ValueError(f"S0_closed: c must be positive, got {c}")
    r = valuation2(c)
    core = c >> r
    if not is_square(core):
        return 0j
    if r == 0:
        return PHASE * euler_phi(c)
    if r % 2:
        return -(2.0 ** (r - 0.5)) * PHASE * euler_phi(core)
    return 0j


# ---------------------------------------------------------------------------
# proof machinery


def lambda_Z(d: int, c: int) -> complex:
    """λ_Z(d, c); i^{d/2} for odd d is read as e^{πid/4}."""
    if c < 1:
        raise ValueError(f"lambda_Z: c must be positive, got {c}")
    if c % 2 and d % 2 == 0:
        return eighth_root(1 - c) * star_upper(d, c)
    if c % 2 == 0 and d % 2:
        return eighth_root(d) * star_lower(c, d)
    return 0j


def gamma_c(N: int, c: int) -> complex:
    """γ_c(N) = c^{−1/2} Σ_{d=1}^{2c} λ_Z(d,c) e^{−πidN/c}"""
    if c < 1:
        raise ValueError(f"gamma_c: c must be positive, got {c}")
    total = 0j
    for d in range(1, 2 * c + 1):
        weight = lambda_Z(d, c)
        if weight:
            total += weight * cmath.exp(-1j * math.pi * ((d * N) % (2 * c)) / c)
    return total / math.sqrt(c)


def Q_r(N: int, r: int) -> float:
    """Real factor with γ_{2^r c'}(N) = Q_r(N)·γ_{c'}(N) for odd c'."""
    if r < 1:
        raise ValueError(f"Q_r: r must be positive, got {r}")
    if N == 0:
        raise ValueError("Q_r: N must be nonzero")
    if r % 2 == 0:
        step = 2 ** (r - 2)
        if N % step:
            return 0.0
        m = N // step
        if m % 4 != 1:
            return 0.0
        return float(2 ** (r // 2)) * (-1) ** (((m - 1) // 4) % 2)
    step = 2 ** (r - 1)
    if N % step:
        return 0.0
    m = N // step
    return float(2 ** ((r - 1) // 2)) * (-1) ** ((m * (m - 1) // 2) % 2)


def R_tilde(N: int, s: float, method: Literal["closed", "series"] = "closed") -> float:
    """R̃_N(s)"""
    if N == 0:
        raise ValueError("R_tilde: N must be nonzero")
    if s <= 0.5:
        raise ValueError(f"R_tilde: s must exceed 1/2, got {s}")
    if method == "series":
        total = 1.0
        for r in range(1, R_TILDE_SERIES_TERMS + 1):
            q = Q_r(N, r)
            if q:
                total += q / 2.0 ** ((r - 1) * s)
        return 0.5 * total
    if N % 4 in (2, 3):
        return 0.0
    D = fundamental_discriminant(N)
    F = math.isqrt(N // D)
    Q = valuation2(F)
    chi = quad_char(N)
    chi2 = kronecker(D, 2)
    head = (1 - 2.0 ** (-2 * s)) / (1 - chi2 * 2.0**-s)
    return head * 2.0 ** (Q * (1 - 2 * s)) * float(T(s, chi, 2**Q))


# ---------------------------------------------------------------------------
# closed forms


@dataclass(frozen=True)
class _IndexData:
    """n = f²d, ψ_{−n} and the 2-adic exponent Q."""

    n: int
    d: int
    w: int
    Q: int
    chi: QuadChar

    @property
    def chi2(self) -> int:
        return self.chi(2)


def _index_data(n: int) -> _IndexData:
    split = squarefree_split(n)
    Q = split.q if split.d % 4 == 3 else split.q - 1
    return _IndexData(n=n, d=split.d, w=split.w, Q=Q, chi=quad_char(-n))


def R_star(n: int, s: float) -> float:
    data = _index_data(n)
    if n % 4 in (1, 2):
        return 0.0
    head = (1 - 2.0 ** (-2 * s)) / (1 - data.chi2 * 2.0**-s)
    return head * 2.0 ** (data.Q * (1 - 2 * s)) * float(T(s, data.chi, 2**data.Q))


def R_n(n: int, s: float) -> float:
    """Local factor at 2: 1 + 2^{−s} − 2^{1−s}R*_n(s)."""
    return 1 + 2.0**-s - 2.0 ** (1 - s) * R_star(n, s)


def _L_value(chi: QuadChar, s: float, cutoff: int) -> LValue:
    if chi.is_trivial:
        return zeta_em(s)
    return L_direct(chi.D, s, cutoff)


def Zn_odd(n: int, s: float, cutoff: int = DEFAULT_DIRECT_CUTOFF) -> tuple[complex, float]:
    """Z_n^{odd}(s) and an absolute error bound."""
    data = _index_data(n)
    L = _L_value(data.chi, s, cutoff)
    z2s = zeta_em(2 * s)
    factor = (
        float(data.w) ** (1 - 2 * s)
        * float(T(s, data.chi, data.w))
        * (1 - data.chi2 * 2.0**-s)
        / (1 - 2.0 ** (-2 * s))
        / z2s.value
    )
    bound = abs(factor) * L.abs_error_bound + abs(L.value * factor) * (
        z2s.abs_error_bound / z2s.value
    )
    return PHASE * L.value * factor, bound


def Zn_closed(n: int, s: float, cutoff: int = DEFAULT_DIRECT_CUTOFF) -> ZetaValue:
    """Z_n(s) = Z_n^{odd}(s)·R_n(s) for n ≠ 0, s > 1."""
    if n == 0:
        raise ValueError("Zn_closed: n = 0 is handled by Z0_closed")
    if s <= 1:
        raise ValueError(f"Zn_closed: s must exceed 1, got {s} (use Z_at_1)")
    odd, bound = Zn_odd(n, s, cutoff)
    rn = R_n(n, s)
    trivial = quad_char(-n).is_trivial
    if trivial:
        LOGGER.debug("Zn_closed(%d, %g): −n is a square, L(s) = zeta(s)", n, s)
    return ZetaValue(
        n=n,
        s=s,
        value=odd * rn,
        method="closed_form",
        error_bound=bound * abs(rn),
        trivial_character=trivial,
    )


def Z0_closed(s: float) -> ZetaValue:
    """Z_0(s) = ζ(2s−1)/ζ(2s) times the 2-factor, for s > 1."""
    if s <= 1:
        raise ValueError(f"Z0_closed: s must exceed 1, got {s} (use Z_at_1)")
    num = zeta_em(2 * s - 1)
    den = zeta_em(2 * s)
    factor = (1 - 2.0 ** (1 - 2 * s) - 2.0**-s) / (1 - 2.0 ** (-2 * s))
    real = num.value / den.value * factor
    bound = abs(real) * (
        num.abs_error_bound / num.value + den.abs_error_bound / den.value
    )
    return ZetaValue(n=0, s=s, value=PHASE * real, method="closed_form", error_bound=bound)


# ---------------------------------------------------------------------------
# series


def series_error_bound(s: float, cutoff: int) -> float:
    """2·Σ_{c>C} c^{1/2−s} ≤ 2·C^{3/2−s}/(s − 3/2)"""
    return 2.0 * float(cutoff) ** (1.5 - s) / (s - 1.5)


def _check_series_args(s: float, cutoff: int) -> None:
    if s < SERIES_MIN_S:
        raise SeriesRangeError(f"series mode needs s >= {SERIES_MIN_S}, got {s}")
    if cutoff < SERIES_MIN_CUTOFF:
        raise ValueError(f"series cutoff must be >= {SERIES_MIN_CUTOFF}, got {cutoff}")


def _series_from_row(n: int, s: float, row: np.ndarray, cutoff: int) -> ZetaValue:
    c = np.arange(1, cutoff + 1, dtype=np.float64)
    terms = np.ascontiguousarray(row[:cutoff] / c ** (s + 0.5))
    value = complex(np.sum(terms))
    return ZetaValue(
        n=n, s=s, value=value, method="series", error_bound=series_error_bound(s, cutoff)
    )


def Z_series(n: int, s: float, cutoff: int, threads: int = 1) -> ZetaValue:
    """Σ_{c≤cutoff} S(n;c)/c^{s+1/2}"""
    _check_series_args(s, cutoff)
    sums = S_batch([n], cutoff, threads)
    return _series_from_row(n, s, sums[0], cutoff)


def Z_series_grid(
    ns: Sequence[int], cutoffs: dict[float, int], threads: int = 1
) -> dict[tuple[int, float], ZetaValue]:
    """Series values for every (n, s) from a single batch of sums."""
    for s, cutoff in cutoffs.items():
        _check_series_args(s, cutoff)
    largest = max(cutoffs.values())
    sums = S_batch(ns, largest, threads)
    LOGGER.info("Kloosterman sums computed for %d indices up to c=%d", len(ns), largest)
    return {
        (n, s): _series_from_row(n, s, sums[i], cutoff)
        for i, n in enumerate(ns)
        for s, cutoff in cutoffs.items()
    }


# ---------------------------------------------------------------------------
# s = 1


def c_factor(n: int) -> float:
    """c_n = 2 − ψ_{−n}(2) for n ≡ 1,2 (4), else 2^{−Q}(1 − ψ_{−n}(2))."""
    data = _index_data(n)
    if n % 4 in (1, 2):
        return float(2 - data.chi2)
    return 2.0**-data.Q * (1 - data.chi2)


def square_branch_factor(n: int) -> float:
    """(2 − 2^{−Q}) relating the limit value to the tabulated one for −n square."""
    return 2.0 - 2.0 ** -_index_data(n).Q


def Z_at_1(n: int, square_branch: SquareBranch = "tabulated") -> ZetaValue:
    """Z_n(1) from the class-number closed forms."""
    base = 6 / math.pi**2
    if n == 0:
        return ZetaValue(n=0, s=1.0, value=PHASE * base * LOG2, method="s1_special")
    data = _index_data(n)
    ratio = float(T(1, data.chi, data.w)) / data.w
    if data.chi.is_trivial:
        real = base * LOG2 * ratio
        if square_branch == "limit":
            real *= square_branch_factor(n)
        return ZetaValue(
            n=n, s=1.0, value=PHASE * real, method="s1_special", trivial_character=True
        )
    L = L_at_1(data.chi.D)
    scale = base * ratio * c_factor(n)
    return ZetaValue(
        n=n,
        s=1.0,
        value=PHASE * L.value * scale,
        method="s1_special",
        error_bound=abs(scale) * L.abs_error_bound,
    )


def Z0_limit_assembly() -> ZetaValue:
    """Z_0(1) as lim ζ(2s−1)(1 − 2^{1−2s} − 2^{−s}) over ζ(2)(1 − 2^{−2s})."""
    # ζ(2s−1) ~ 1/(2(s−1)), so the limit is half the derivative at s = 1
    derivative = 2 * LOG2 * 2.0**-1 + LOG2 * 2.0**-1
    limit = derivative / 2
    real = limit / ZETA_2 / (1 - 2.0**-2)
    return ZetaValue(n=0, s=1.0, value=PHASE * real, method="limit_assembly")


def Z_limit_assembly(n: int) -> ZetaValue:
    """Z_n(1) from the components Z_n^{odd}(1) and R_n(1) at s = 1."""
    if n == 0:
        return Z0_limit_assembly()
    data = _index_data(n)
    ratio = float(T(1, data.chi, data.w)) / data.w
    if not data.chi.is_trivial:
        L = L_at_1(data.chi.D)
        odd = L.value / ZETA_2 * ratio * (1 - data.chi2 / 2) / (1 - 2.0**-2)
        return ZetaValue(
            n=n,
            s=1.0,
            value=PHASE * odd * R_n(n, 1.0),
            method="limit_assembly",
            error_bound=abs(odd / L.value) * L.abs_error_bound if L.value else 0.0,
        )
    # ζ(s)·(1 − 2^{1−s}g(s)) with g(1) = 1 has limit log 2·g(1) − g'(1)
    power = 2**data.Q
    t_value = float(T(1, None, power))
    g1 = t_value / power
    g1_prime = g1 * (-2 * data.Q * LOG2) + T_derivative(1.0, None, power) / power
    limit = LOG2 * g1 - g1_prime
    return ZetaValue(
        n=n,
        s=1.0,
        value=PHASE * ratio * limit / ZETA_2,
        method="limit_assembly",
        trivial_character=True,
    )


def r_from_Z(n: int, value: ZetaValue) -> float:
    """2e^{−3πi/4}π√n·Z_n(1), which recovers r(n)."""
    return 2 * math.pi * math.sqrt(n) * value.real_part
