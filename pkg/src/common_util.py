"""
共通ユーティリティモジュール

Shared numeric helpers: exact eighth roots of unity, the fixed Kloosterman
phase, the precision error type, tolerance bookkeeping and output formatting.
"""

from __future__ import annotations

import cmath
import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

LOGGER = logging.getLogger(__name__)

_H = math.sqrt(0.5)

# e^{πik/4} for k = 0..7, exact up to the rounding of sqrt(1/2)
EIGHTH_ROOTS: tuple[complex, ...] = (
    complex(1.0, 0.0),
    complex(_H, _H),
    complex(0.0, 1.0),
    complex(-_H, _H),
    complex(-1.0, 0.0),
    complex(-_H, -_H),
    complex(0.0, -1.0),
    complex(_H, -_H),
)

PHASE = EIGHTH_ROOTS[3]  # e^{3πi/4}


class PrecisionError(RuntimeError):
    """数値精度が足りず結果を確定できない場合のエラー"""


class SeriesRangeError(ValueError):
    """Series evaluation requested outside its convergence range."""


def eighth_root(k: int) -> complex:
    """e^{πik/4}"""
    return EIGHTH_ROOTS[k % 8]


def strip_phase(value: complex) -> complex:
    """value·e^{−3πi/4}"""
    return value * EIGHTH_ROOTS[5]


def phase_residual(value: complex) -> float:
    return abs(strip_phase(value).imag)


def principal_sqrt(z: complex) -> complex:
    """Principal branch, argument in (−π, π]."""
    return cmath.sqrt(z)


def require_real(value: complex, tol: float, label: str) -> complex:
    if abs(value.imag) > tol:
        raise PrecisionError(
            f"{label}: imaginary part {value.imag:.3e} exceeds tolerance {tol:.1e}"
        )
    return value


@dataclass(frozen=True)
class Tolerances:
    """Identity tolerances; every entry is multiplied by ``scale``."""

    exact: float = 1e-10
    shadow: float = 1e-8
    hecke_half: float = 1e-7
    multiplier: float = 1e-8
    realness: float = 1e-10
    class_number_round: float = 1e-6
    class_number_ambiguous: float = 1e-3
    series_practical: float = 1e-3
    scale: float = 1.0

    @classmethod
    def from_config(cls, config: Any) -> Tolerances:
        block = config.get("tolerances", {}) or {}
        scale = float(config.get("tolerances.scale", 1.0))
        known = {k: float(v) for k, v in block.items() if k in cls.__annotations__}
        known["scale"] = scale
        return cls(**known)

    def __getitem__(self, name: str) -> float:
        return float(getattr(self, name)) * self.scale


def format_real(value: float, digits: int = 12) -> str:
    if value == 0.0:
        return "0"
    return f"{value:.{digits}g}"


def format_complex(value: complex, digits: int = 12) -> str:
    re, im = value.real, value.imag
    if abs(im) <= 10.0 ** (-digits) * max(1.0, abs(re)):
        return format_real(re, digits)
    sign = "-" if im < 0 else "+"
    return f"{format_real(re, digits)}{sign}{format_real(abs(im), digits)}i"


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_value(value: Any, digits: int = 12) -> str:
    """plain 出力用の数値整形"""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_real(value, digits)
    if isinstance(value, complex):
        return format_complex(value, digits)
    return str(value)


def format_exact(value: Any) -> str:
    """CSV 用: float は JSON と同じ最短往復表現 (repr) で書く"""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(float(value))
    if isinstance(value, complex):
        re, im = value.real, value.imag
        if im == 0.0:
            return repr(re)
        sign = "-" if im < 0 else "+"
        return f"{re!r}{sign}{abs(im)!r}i"
    return str(value)


def json_ready(value: Any) -> Any:
    """Convert numeric payloads to JSON-compatible structures.

    Floats are left as floats so ``json.dumps`` writes the shortest round-trip
    representation; complex values become ``{"re": .., "im": ..}`` and
    rationals become ``"p/q"`` strings.
    """
    if isinstance(value, dict):
        return {str(k): json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_ready(v) for v in value]
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


def dump_json(payload: Any) -> str:
    return json.dumps(json_ready(payload), ensure_ascii=False, sort_keys=False)
