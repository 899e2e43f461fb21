"""
Identity verification suites.

Each suite checks one family of identities between independently computed
quantities and returns a ``VerifyReport``.  Cases run in a fixed order so the
serialized reports are identical for every thread count.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from typing import Any

from src.arith_util import is_fundamental, is_square
from src.common_util import PHASE, Tolerances
from src.config_manager import AppConfig
from src.kloosterman_util import (
    LOG2,
    S,
    S0_closed,
    Q_r,
    R_tilde,
    Z0_closed,
    Z_at_1,
    Z_limit_assembly,
    Z_series_grid,
    ZetaValue,
    Zn_closed,
    gamma_c,
    lam,
    lambda_Z,
    r_from_Z,
    square_branch_factor,
)
from src.lseries_util import L_at_1
from src.maass_util import (
    GammaThetaMatrix,
    c_minus,
    c_minus_class_number,
    c_plus,
    c_plus_class_number,
    coeff_table,
    hecke_Tp2,
    nu_theta,
    shadow_coefficient,
    theta_half,
)
from src.quadform_util import (
    class_number_imag,
    class_number_real,
    hurwitz_direct,
    hurwitz_formula,
    omega_units,
    pell_unit,
    r3_brute,
    r3_hurwitz,
    r3_table,
)

SUITES: tuple[str, ...] = ("classnumbers", "kloosterman", "shadow", "hecke", "multiplier")
MIN_N_MAX = 10

MULTIPLIER_MATRICES: tuple[tuple[int, int, int, int], ...] = (
    (0, 1, -1, 0),
    (0, -1, 1, 0),
    (1, 2, 0, 1),
    (1, -2, 0, 1),
    (1, 0, 2, 1),
    (1, 0, -2, 1),
    (-1, 0, -2, -1),
    (-1, 0, 2, -1),
    (1, 2, 2, 5),
    (2, 1, 3, 2),
    (2, -1, 1, 0),
    (2, 1, -1, 0),
)
MULTIPLIER_TAU = complex(0.1, 1.3)


@dataclass(frozen=True)
class CaseResult:
    label: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.error <= self.tolerance


@dataclass(frozen=True)
class VerifyReport:
    suite: str
    cases_run: int
    cases_failed: int
    max_abs_error: float
    parameter_range: str
    notes: tuple[str, ...] = ()
    cases: tuple[CaseResult, ...] = field(default=(), repr=False)

    @property
    def passed(self) -> bool:
        return self.cases_failed == 0

    def to_dict(self, detail: bool = False) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "suite": self.suite,
            "cases_run": self.cases_run,
            "cases_failed": self.cases_failed,
            "max_abs_error": self.max_abs_error,
            "parameter_range": self.parameter_range,
            "notes": list(self.notes),
        }
        if detail:
            payload["cases"] = [
                {
                    "label": c.label,
                    "error": c.error,
                    "tolerance": c.tolerance,
                    "passed": c.passed,
                }
                for c in self.cases
            ]
        return payload


class _Collector:
    def __init__(self, suite: str, logger: logging.Logger):
        self.suite = suite
        self.logger = logger
        self.cases: list[CaseResult] = []
        self.notes: list[str] = []
        self.ranges: list[str] = []

    def check(self, label: str, error: float, tolerance: float) -> None:
        case = CaseResult(label=label, error=float(error), tolerance=float(tolerance))
        if not case.passed:
            self.logger.warning(
                "%s: %s failed (error %.3e > %.1e)", self.suite, label, error, tolerance
            )
        self.cases.append(case)

    def exact(self, label: str, left: Any, right: Any) -> None:
        self.check(label, float(abs(left - right)), 0.0)

    def report(self) -> VerifyReport:
        errors = [c.error for c in self.cases]
        return VerifyReport(
            suite=self.suite,
            cases_run=len(self.cases),
            cases_failed=sum(1 for c in self.cases if not c.passed),
            max_abs_error=max(errors, default=0.0),
            parameter_range="; ".join(self.ranges),
            notes=tuple(self.notes),
            cases=tuple(self.cases),
        )


class VerificationService:
    """Runs the identity suites with tolerances and cutoffs from ``AppConfig``."""

    def __init__(self, config: AppConfig | None = None, threads: int | None = None):
        self.logger = logging.getLogger(__name__)
        self.config = config or AppConfig()
        self.tol = Tolerances.from_config(self.config)
        self.threads = int(threads if threads is not None else self.config.get("threads", 1))
        self._suites: dict[str, Callable[[int], VerifyReport]] = {
            "classnumbers": self.verify_classnumbers,
            "kloosterman": self.verify_kloosterman,
            "shadow": self.verify_shadow,
            "hecke": self.verify_hecke,
            "multiplier": self.verify_multiplier,
        }

    def run(self, suite: str, n_max: int) -> list[VerifyReport]:
        """Run one suite, or every suite for ``all``, in SUITES order."""
        if n_max < MIN_N_MAX:
            raise ValueError(f"verify: n_max must be at least {MIN_N_MAX}, got {n_max}")
        names: Iterable[str] = SUITES if suite == "all" else (suite,)
        reports = []
        for name in names:
            if name not in self._suites:
                raise ValueError(f"unknown verify suite: {name}")
            self.logger.info("running suite %s (n_max=%d)", name, n_max)
            report = self._suites[name](n_max)
            self.logger.info(
                "suite %s: %d cases, %d failed", name, report.cases_run, report.cases_failed
            )
            reports.append(report)
        return reports

    # ------------------------------------------------------------------
    # class numbers

    def verify_classnumbers(self, n_max: int) -> VerifyReport:
        col = _Collector("classnumbers", self.logger)
        col.ranges.append(f"1 <= n <= {n_max}")

        for n in range(1, n_max + 1):
            col.exact(f"r3_brute({n}) = r3_hurwitz({n})", r3_brute(n), r3_hurwitz(n))
        for N in range(3, n_max + 1):
            if N % 4 in (0, 3):
                col.exact(f"H(-{N}) direct = formula", hurwitz_direct(N), hurwitz_formula(N))

        for D in range(-n_max + 1, 0):
            if not is_fundamental(D):
                continue
            h = class_number_imag(D)
            expected = 2 * math.pi * h / (omega_units(D) * math.sqrt(-D))
            col.check(f"L(1, chi_{D}) = 2 pi h / (w sqrt|D|)", abs(L_at_1(D).value - expected), self.tol["exact"])

        for D in range(5, n_max):
            if not is_fundamental(D) or is_square(D):
                continue
            unit = pell_unit(D)
            col.exact(f"norm of unit for D={D}", abs(unit.norm), 4)
            raw = math.sqrt(D) * L_at_1(D).value / (2 * unit.log_eps)
            h = class_number_real(
                D, self.tol["class_number_round"], self.tol["class_number_ambiguous"]
            )
            col.check(f"h({D}) integrality", abs(raw - h), self.tol["class_number_round"])

        for D, h in ((5, 1), (8, 1), (229, 3)):
            col.exact(f"h({D}) = {h}", class_number_real(D), h)

        unit = pell_unit(5)
        single = math.sqrt(5) * L_at_1(5).value / unit.log_eps
        col.notes.append(
            "real class number uses L(1, chi_D) = 2 h(D) log(eps_D) / sqrt(D); "
            f"without the factor 2 the D = 5 value would be {single:.12g} instead of 1"
        )
        return col.report()

    # ------------------------------------------------------------------
    # Kloosterman sums and zeta functions

    def verify_kloosterman(self, n_max: int) -> VerifyReport:
        col = _Collector("kloosterman", self.logger)
        exact = self.tol["exact"]

        c_top = max(n_max, 200)
        col.ranges.append(f"S(0;c) for c <= {c_top}")
        for c in range(1, c_top + 1):
            col.check(f"S(0;{c}) closed form", abs(S(0, c).value - S0_closed(c)), exact)

        col.ranges.append("lambda and gamma bridges for c <= 30, |n| <= 10")
        for c in range(1, 31):
            sign = (-1) ** (c + 1)
            for d in range(2 * c):
                value = lam(d, c)
                if value == 0:
                    continue
                bridged = PHASE * sign * lambda_Z(d, c)
                col.check(f"conj(lambda({d},{c}))^3", abs(value.conjugate() ** 3 - bridged), exact)
            for n in range(-10, 11):
                bridged = PHASE * sign * math.sqrt(c) * gamma_c(-n, c)
                col.check(f"S({n};{c}) = gamma bridge", abs(S(n, c).value - bridged), exact)

        col.ranges.append("gamma_{2^r c'} for r <= 4, odd c' <= 15, 0 < |N| <= 20")
        for r in range(1, 5):
            for c_odd in range(1, 16, 2):
                for N in range(-20, 21):
                    if N == 0:
                        continue
                    left = gamma_c(N, 2**r * c_odd)
                    right = Q_r(N, r) * gamma_c(N, c_odd)
                    col.check(f"gamma_{2**r * c_odd}({N}) = Q_{r} gamma_{c_odd}", abs(left - right), exact)

        col.ranges.append("R_tilde series vs closed for s in {2, 3}, 0 < |N| <= 50")
        for s in (2.0, 3.0):
            for N in range(-50, 51):
                if N == 0:
                    continue
                diff = abs(R_tilde(N, s, "series") - R_tilde(N, s, "closed"))
                col.check(f"R_tilde({N}, {s:g})", diff, exact)

        self._check_series(col)
        self._check_s1(col, min(n_max, 300))
        return col.report()

    def _check_series(self, col: _Collector) -> None:
        cutoffs = self.config.series_cutoffs()
        ns = list(range(-10, 11))
        col.ranges.append(
            "series vs closed for n in -10..10, "
            + ", ".join(f"s={s:g} C={c}" for s, c in cutoffs.items())
        )
        grid = Z_series_grid(ns, cutoffs, self.threads)
        worst = 0.0
        for s in cutoffs:
            for n in ns:
                series = grid[(n, s)]
                closed = Z0_closed(s) if n == 0 else Zn_closed(n, s)
                diff = abs(series.value - closed.value)
                worst = max(worst, diff)
                col.check(
                    f"Z_{n}({s:g}) series vs closed",
                    diff,
                    series.error_bound + closed.error_bound,
                )
                self._check_phase(col, closed)
        col.notes.append(
            f"largest observed series/closed gap {worst:.3e} "
            f"(practical target {self.tol['series_practical']:.0e})"
        )

    def _check_phase(self, col: _Collector, value: ZetaValue) -> None:
        tol = max(self.tol["exact"], 2 * value.error_bound)
        col.check(f"phase purity Z_{value.n}({value.s:g})", value.phase_residual, tol)

    def _check_s1(self, col: _Collector, bound: int) -> None:
        exact = self.tol["exact"]
        col.ranges.append(f"s = 1 routes for |n| <= {bound}")
        z0 = Z_at_1(0)
        col.check("Z_0(1) = e^{3pi i/4} 6 log2 / pi^2", abs(z0.value - PHASE * 6 * LOG2 / math.pi**2), exact)
        col.check("Z_0(1) limit assembly", abs(z0.value - Z_limit_assembly(0).value), exact)
        ratios: dict[int, float] = {}
        for n in range(-bound, bound + 1):
            if n == 0:
                continue
            tabulated = Z_at_1(n)
            self._check_phase(col, tabulated)
            assembled = Z_limit_assembly(n)
            if tabulated.trivial_character:
                limit = Z_at_1(n, "limit")
                col.check(f"Z_{n}(1) square branch limit", abs(limit.value - assembled.value), exact)
                ratios[n] = square_branch_factor(n)
            else:
                col.check(f"Z_{n}(1) limit assembly", abs(tabulated.value - assembled.value), exact)
        col.notes.append(
            "the log 2 branch of Z_n(1) is taken when psi_{-n} is trivial, i.e. -n is a square"
        )
        differing = sorted(n for n, ratio in ratios.items() if ratio != 1.0)
        if differing:
            shown = ", ".join(f"n={n}: {ratios[n]:g}" for n in differing[:4])
            col.notes.append(
                "for -n = m^2 with m even the limit of Z_n(s) at s = 1 is the tabulated "
                f"value times 2 - 2^(-v2(m)) ({shown})"
            )

    # ------------------------------------------------------------------
    # shadow identity

    def verify_shadow(self, n_max: int) -> VerifyReport:
        col = _Collector("shadow", self.logger)
        tol = self.tol["shadow"]
        col.ranges.append(f"1 <= n <= {n_max}")
        r = r3_table(n_max)
        minus = coeff_table("nonholo_minus", n_max, self.threads, realness_tol=self.tol["realness"])
        for n in range(1, n_max + 1):
            expected = -r[n] / (2 * math.sqrt(math.pi * n))
            col.check(f"c-({n}) = -r({n})/(2 sqrt(pi n))", abs(minus[n] - expected), tol)
            col.check(f"r({n}) from Z_{n}(1)", abs(r_from_Z(n, Z_at_1(n)) - r[n]), tol)
            col.check(f"xi image at {n}", abs(shadow_coefficient(n) - r[n]), tol)
            col.check(f"c-({n}) realness", abs(complex(minus[n]).imag), self.tol["realness"])

        target = -6 * LOG2 / math.pi
        col.ranges.append("c+(m^2) for 1 <= m <= 15")
        for m in range(1, 16):
            value = c_plus(m * m)
            col.check(f"c+({m * m}) = -(6/pi) log 2", abs(value - target), self.tol["exact"])
            col.check(f"c+({m * m}) realness", abs(value.imag), self.tol["realness"])
        for n in (1, 3):
            col.check(f"c-({n}) direct", abs(c_minus(n) - minus[n]), 0.0)

        top = min(n_max, 300)
        col.ranges.append(f"class number forms of c+ and c- for 1 <= n <= {top}")
        round_tol = self.tol["class_number_round"]
        ambiguous_tol = self.tol["class_number_ambiguous"]
        for n in range(1, top + 1):
            plus = c_plus_class_number(n, round_tol, ambiguous_tol)
            col.check(f"c+({n}) via h({plus.D})", abs(plus.value - c_plus(n).real), self.tol["exact"])
            neg = c_minus_class_number(n)
            col.check(f"c-({n}) via h({neg.D})", abs(neg.value - complex(minus[n]).real), self.tol["exact"])
        return col.report()

    # ------------------------------------------------------------------
    # Hecke eigenforms

    def verify_hecke(self, n_max: int) -> VerifyReport:
        col = _Collector("hecke", self.logger)
        n_three_halves = n_max
        col.ranges.append(f"weight 3/2: p in (3, 5, 7), n <= {n_three_halves}")
        r_table = coeff_table("r3", 49 * n_three_halves)
        for p in (3, 5, 7):
            image = hecke_Tp2(r_table, p, 1, n_three_halves)
            for n in range(0, n_three_halves + 1):
                col.exact(f"T({p}^2) r at {n}", image[n], (1 + p) * r_table[n])

        n_half = min(50, n_max)
        col.ranges.append(f"weight 1/2: p in (3, 5), 1 <= n <= {n_half}")
        plus = coeff_table(
            "holo_plus",
            25 * n_half,
            self.threads,
            constant_term=self.config.get("conventions.constant_term", "theorem2"),
            square_branch=self.config.get("conventions.square_branch", "tabulated"),
            realness_tol=self.tol["realness"],
        )
        for p in (3, 5):
            image = hecke_Tp2(plus, p, 0, n_half)
            eigen = 1 + 1 / p
            for n in range(1, n_half + 1):
                col.check(f"T({p}^2) c+ at {n}", abs(image[n] - eigen * plus[n]), self.tol["hecke_half"])
            col.check(f"T({p}^2) c+ at 0", abs(image[0] - eigen * plus[0]), self.tol["hecke_half"])
        col.notes.append(
            "the constant term satisfies the weight 1/2 eigen-relation for any value, "
            "so it does not distinguish the theorem2 and intro conventions"
        )
        return col.report()

    # ------------------------------------------------------------------
    # theta multiplier

    def verify_multiplier(self, n_max: int) -> VerifyReport:
        col = _Collector("multiplier", self.logger)
        cutoff = int(self.config.get("cutoffs.multiplier_theta", 60))
        tau = MULTIPLIER_TAU
        col.ranges.append(f"tau = {tau.real:g}+{tau.imag:g}i, theta cutoff {cutoff}")
        base = theta_half(tau, cutoff)
        for a, b, c, d in MULTIPLIER_MATRICES:
            A = GammaThetaMatrix(a, b, c, d)
            left = theta_half(A.act(tau), cutoff)
            right = nu_theta(A) * A.automorphy(tau) * base
            col.check(f"theta transform under ({a} {b}; {c} {d})", abs(left - right), self.tol["multiplier"])
            col.check(f"|nu({a} {b}; {c} {d})| = 1", abs(abs(nu_theta(A)) - 1), self.tol["exact"])
        return col.report()


def aggregate(reports: list[VerifyReport], detail: bool = False) -> dict[str, Any]:
    """Combine suite reports into one serializable summary."""
    notes: list[str] = []
    for report in reports:
        notes.extend(report.notes)
    return {
        "suites": [r.to_dict(detail) for r in reports],
        "cases_run": sum(r.cases_run for r in reports),
        "cases_failed": sum(r.cases_failed for r in reports),
        "notes": notes,
    }
