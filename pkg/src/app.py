"""theta-maass command line interface.

Subcommands:

* ``coeff``     coefficient tables (holo / shadow / r3 / hurwitz)
* ``quantity``  single quantities (class numbers, units, L-values, Z_n(s), ...)
* ``eval``      Θ, Θ³ and truncated F_Θ at a point of the upper half-plane
* ``verify``    identity suites

Results go to stdout; logs go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import re
import sys
from collections.abc import Sequence
from typing import Any

from src.arith_util import kronecker
from src.common_util import (
    PrecisionError,
    SeriesRangeError,
    Tolerances,
    dump_json,
    format_exact,
    format_value,
)
from src.config_manager import AppConfig
from src.kloosterman_util import Z0_closed, Z_at_1, Z_series, Zn_closed
from src.lseries_util import DEFAULT_ZETA_TERMS, L_at_1, L_direct, L_euler, zeta
from src.maass_util import (
    UpperHalfPoint,
    coeff_table,
    F_eval,
    theta_cubed_eval,
    theta_eval,
    theta_half,
)
from src.quadform_util import (
    class_number_imag,
    class_number_real,
    hurwitz_direct,
    hurwitz_formula,
    hurwitz_table,
    pell_unit,
    r3_brute,
    r3_hurwitz,
    r3_table,
)
from src.verify_service import SUITES, VerificationService, aggregate

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_PRECISION = 3
EXIT_SERIES_RANGE = 4
MAX_DIGITS = 15

LOGGER = logging.getLogger(__name__)

_NUMBER = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)"
_TAU_RE = re.compile(rf"^\s*(?P<x>{_NUMBER})\s*(?P<sign>[+-])\s*(?P<y>\d+(?:\.\d*)?|\.\d+)?\s*i\s*$")


def parse_tau(text: str) -> UpperHalfPoint:
    """'x+iy' 形式 (例: 0.5+1i, 0-2i) を解析する."""
    match = _TAU_RE.match(text)
    if not match:
        raise ValueError(f"malformed tau {text!r}; expected x+yi")
    y = float(match.group("y") or 1.0)
    if match.group("sign") == "-":
        y = -y
    return UpperHalfPoint(float(match.group("x")), y)


class Output:
    """plain / json / csv の出力整形"""

    def __init__(self, fmt: str, digits: int, stream: Any = None):
        self.fmt = fmt
        self.digits = digits
        self.stream = stream or sys.stdout

    def value(self, v: Any) -> str:
        return format_value(v, self.digits)

    def table(self, columns: Sequence[str], rows: Sequence[Sequence[Any]], payload: Any) -> None:
        if self.fmt == "json":
            self.stream.write(dump_json(payload) + "\n")
            return
        if self.fmt == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([format_exact(v) for v in row])
            self.stream.write(buf.getvalue())
            return
        for row in rows:
            self.stream.write(" ".join(self.value(v) for v in row) + "\n")

    def record(self, fields: dict[str, Any]) -> None:
        """Single result: key=value lines, one JSON object, or a one-row CSV."""
        if self.fmt == "json":
            self.stream.write(dump_json(fields) + "\n")
        elif self.fmt == "csv":
            self.table(list(fields), [list(fields.values())], fields)
        else:
            for key, v in fields.items():
                self.stream.write(f"{key}={self.value(v)}\n")


def _complex_entry(n: int, value: complex | int) -> dict[str, Any]:
    z = complex(value)
    return {"n": n, "re": z.real, "im": z.imag}


# ---------------------------------------------------------------------------
# commands


def cmd_coeff(args: argparse.Namespace, config: AppConfig, out: Output) -> int:
    n_max = args.n_max
    if n_max < 0:
        raise ValueError(f"--n-max must be nonnegative, got {n_max}")
    threads = int(config.get("threads", 1))
    realness = Tolerances.from_config(config)["realness"]
    family = args.family
    if family == "hurwitz":
        table = hurwitz_table(n_max)
        rows = [(n, v) for n, v in enumerate(table)]
        payload = {
            "family": family,
            "n_max": n_max,
            "entries": [{"n": n, "value": v} for n, v in rows],
        }
        out.table(["n", "value"], rows, payload)
        return EXIT_OK
    if family == "r3":
        values = r3_table(n_max)
        rows = [(n, v) for n, v in enumerate(values)]
        payload = {"family": family, "n_max": n_max, "entries": [_complex_entry(n, v) for n, v in rows]}
        out.table(["n", "r3"], rows, payload)
        return EXIT_OK
    if family == "holo":
        table = coeff_table(
            "holo_plus",
            n_max,
            threads,
            constant_term=config.get("conventions.constant_term"),
            square_branch=config.get("conventions.square_branch"),
            realness_tol=realness,
        )
        rows = [(n, complex(table[n]).real) for n in sorted(table.entries)]
        payload = {
            "family": family,
            "n_max": n_max,
            "entries": [_complex_entry(n, table[n]) for n in sorted(table.entries)],
        }
        out.table(["n", "value"], rows, payload)
        return EXIT_OK
    # shadow: c⁻(n) together with r(n) and the identity residual
    table = coeff_table("nonholo_minus", n_max, threads, realness_tol=realness)
    r = r3_table(n_max)
    rows = []
    entries = []
    for n in range(1, n_max + 1):
        z = complex(table[n])
        residual = abs(-2 * math.sqrt(math.pi * n) * z.real - r[n])
        rows.append((n, z.real, r[n], residual))
        entry = _complex_entry(n, z)
        entry.update({"r3": r[n], "residual": residual})
        entries.append(entry)
    out.table(
        ["n", "value", "r3", "residual"],
        rows,
        {"family": family, "n_max": n_max, "entries": entries},
    )
    return EXIT_OK


def cmd_quantity(args: argparse.Namespace, config: AppConfig, out: Output) -> int:
    kind = args.kind
    if kind == "classnumber":
        D = args.D
        if D < 0:
            out.record({"D": D, "h": class_number_imag(D)})
            return EXIT_OK
        _check_unit_range(D, config)
        tol = Tolerances.from_config(config)
        h = class_number_real(D, tol["class_number_round"], tol["class_number_ambiguous"])
        out.record({"D": D, "h": h})
        return EXIT_OK
    if kind == "hurwitz":
        direct = hurwitz_direct(args.N)
        formula = hurwitz_formula(args.N)
        if direct != formula:
            raise RuntimeError(f"H(-{args.N}): enumeration {direct} != formula {formula}")
        out.record({"N": args.N, "H": direct})
        return EXIT_OK
    if kind == "unit":
        _check_unit_range(args.D, config)
        unit = pell_unit(args.D)
        out.record({"D": unit.D, "x": unit.x, "y": unit.y, "logeps": unit.log_eps, "norm": unit.norm})
        return EXIT_OK
    if kind == "lvalue":
        if args.s == 1:
            value = L_at_1(args.D)
        elif args.euler:
            value = L_euler(args.D, args.s, int(config.get("cutoffs.euler_primes", 10_000)))
        elif args.D == 1:
            value = zeta(args.s, int(config.get("cutoffs.zeta_terms", DEFAULT_ZETA_TERMS)))
        else:
            cutoff = args.cutoff or int(config.get("cutoffs.l_direct", 1_000_000))
            value = L_direct(args.D, args.s, cutoff)
        out.record({"D": value.D, "s": value.s, "value": value.value, "error_bound": value.abs_error_bound})
        return EXIT_OK
    if kind == "zeta-kloosterman":
        return _quantity_zeta(args, config, out)
    if kind == "r3":
        if args.n < 0:
            raise ValueError(f"--n must be nonnegative, got {args.n}")
        brute = r3_brute(args.n)
        via_h = r3_hurwitz(args.n) if args.n else 1
        out.record({"n": args.n, "brute": brute, "hurwitz": via_h})
        return EXIT_OK
    if kind == "kronecker":
        out.record({"a": args.a, "b": args.b, "value": kronecker(args.a, args.b)})
        return EXIT_OK
    raise ValueError(f"unknown quantity: {kind}")


def _check_unit_range(D: int, config: AppConfig) -> None:
    cap = int(config.get("limits.max_unit_discriminant", 1_000_000))
    if D > cap:
        raise ValueError(f"D={D} exceeds the supported maximum {cap}")


def _quantity_zeta(args: argparse.Namespace, config: AppConfig, out: Output) -> int:
    n, s = args.n, args.s
    if args.series:
        cutoff = args.cutoff or config.series_cutoffs().get(float(s), 5_000)
        value = Z_series(n, s, cutoff, int(config.get("threads", 1)))
    elif s == 1:
        value = Z_at_1(n, config.get("conventions.square_branch", "tabulated"))
    elif n == 0:
        value = Z0_closed(s)
    else:
        value = Zn_closed(n, s, int(config.get("cutoffs.l_direct", 1_000_000)))
    out.record(
        {
            "n": n,
            "s": s,
            "method": value.method,
            "value": value.value,
            "phase_residual": value.phase_residual,
            "error_bound": value.error_bound,
        }
    )
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, config: AppConfig, out: Output) -> int:
    tau = parse_tau(args.tau)
    if args.n_max < 1:
        raise ValueError(f"--n-max must be positive, got {args.n_max}")
    cutoff = int(config.get("cutoffs.theta", 40))
    theta = theta_eval(tau, cutoff)
    cube = theta_cubed_eval(tau, cutoff)
    F = F_eval(tau, args.n_max, constant_term=config.get("conventions.constant_term"))
    out.record(
        {
            "tau": tau.tau,
            "theta": theta.value,
            "theta_error": theta.error,
            "theta_half": theta_half(tau.tau, int(config.get("cutoffs.multiplier_theta", 60))),
            "theta_cubed": cube.value,
            "theta_cubed_error": cube.error,
            "F": F.value,
            "F_holomorphic": F.holomorphic,
            "F_nonholomorphic": F.sqrt_term + F.nonholomorphic,
            "F_last_term": F.last_term,
        }
    )
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: AppConfig, out: Output) -> int:
    service = VerificationService(config)
    reports = service.run(args.suite, args.n_max)
    detail = args.verbose >= 2
    summary = aggregate(reports, detail)
    rows = [
        (r.suite, r.cases_run, r.cases_failed, r.max_abs_error)
        for r in reports
    ]
    if out.fmt == "plain":
        out.table([], rows, summary)
        for note in summary["notes"]:
            out.stream.write(f"note: {note}\n")
        if detail:
            for report in reports:
                for case in report.cases:
                    status = "ok" if case.passed else "FAIL"
                    out.stream.write(
                        f"{report.suite} {status} {case.label} "
                        f"{out.value(case.error)} {out.value(case.tolerance)}\n"
                    )
    else:
        out.table(["suite", "cases_run", "cases_failed", "max_abs_error"], rows, summary)
    return EXIT_OK if summary["cases_failed"] == 0 else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="theta-maass",
        description="Coefficients of the harmonic Maass form with shadow Θ³ and their identities",
    )
    p.add_argument("--config", default=None, help="設定ファイル (YAML)")
    p.add_argument("--format", choices=("plain", "json", "csv"), default=None)
    p.add_argument("--digits", type=int, default=None, help=f"有効桁数 (1..{MAX_DIGITS})")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--tol-scale", dest="tol_scale", type=float, default=None)
    p.add_argument(
        "--constant-term-convention",
        dest="constant_term",
        choices=("theorem2", "intro"),
        default=None,
    )
    p.add_argument(
        "--square-branch-convention",
        dest="square_branch",
        choices=("tabulated", "limit"),
        default=None,
    )
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("coeff", help="係数表")
    c.add_argument("family", choices=("holo", "shadow", "r3", "hurwitz"))
    c.add_argument("--n-max", dest="n_max", type=int, required=True)

    q = sub.add_parser("quantity", help="個別の量")
    qs = q.add_subparsers(dest="kind", required=True)
    k = qs.add_parser("classnumber")
    k.add_argument("--D", dest="D", type=int, required=True)
    k = qs.add_parser("hurwitz")
    k.add_argument("--N", dest="N", type=int, required=True)
    k = qs.add_parser("unit")
    k.add_argument("--D", dest="D", type=int, required=True)
    k = qs.add_parser("lvalue")
    k.add_argument("--D", dest="D", type=int, required=True)
    k.add_argument("--s", dest="s", type=float, default=1.0)
    k.add_argument("--cutoff", type=int, default=None)
    k.add_argument("--euler", action="store_true", help="Euler 積で評価")
    k = qs.add_parser("zeta-kloosterman")
    k.add_argument("--n", dest="n", type=int, required=True)
    k.add_argument("--s", dest="s", type=float, required=True)
    route = k.add_mutually_exclusive_group()
    route.add_argument("--series", action="store_true")
    route.add_argument("--closed", action="store_true")
    k.add_argument("--cutoff", type=int, default=None)
    k = qs.add_parser("r3")
    k.add_argument("--n", dest="n", type=int, required=True)
    k = qs.add_parser("kronecker")
    k.add_argument("--a", dest="a", type=int, required=True)
    k.add_argument("--b", dest="b", type=int, required=True)

    e = sub.add_parser("eval", help="上半平面の点で評価")
    e.add_argument("--tau", required=True, help="x+yi")
    e.add_argument("--n-max", dest="n_max", type=int, default=40)

    v = sub.add_parser("verify", help="恒等式の検証")
    v.add_argument("--suite", choices=("all", *SUITES), default="all")
    v.add_argument("--n-max", dest="n_max", type=int, default=200)
    return p


def _apply_overrides(args: argparse.Namespace, config: AppConfig) -> None:
    if args.format is not None:
        config.set("output.format", args.format)
    if args.digits is not None:
        config.set("output.digits", args.digits)
    if args.threads is not None:
        config.set("threads", args.threads)
    if args.tol_scale is not None:
        config.set("tolerances.scale", args.tol_scale)
    if args.constant_term is not None:
        config.set("conventions.constant_term", args.constant_term)
    if args.square_branch is not None:
        config.set("conventions.square_branch", args.square_branch)
    digits = int(config.get("output.digits", 12))
    if not 1 <= digits <= MAX_DIGITS:
        raise ValueError(f"--digits must be between 1 and {MAX_DIGITS}, got {digits}")
    if int(config.get("threads", 1)) < 1:
        raise ValueError("--threads must be positive")
    if float(config.get("tolerances.scale", 1.0)) <= 0:
        raise ValueError("--tol-scale must be positive")


def setup_logging(config: AppConfig, verbose: int) -> None:
    level = "DEBUG" if verbose else str(config.get("logging.level", "WARNING")).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format=config.get("logging.format"),
        datefmt=config.get("logging.date_format", "%Y-%m-%d %H:%M:%S"),
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


COMMANDS = {
    "coeff": cmd_coeff,
    "quantity": cmd_quantity,
    "eval": cmd_eval,
    "verify": cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    config = AppConfig(args.config)
    setup_logging(config, args.verbose)
    try:
        _apply_overrides(args, config)
        out = Output(config.get("output.format", "plain"), int(config.get("output.digits", 12)))
        return COMMANDS[args.cmd](args, config, out)
    except SeriesRangeError as e:
        LOGGER.error("%s", e)
        return EXIT_SERIES_RANGE
    except PrecisionError as e:
        LOGGER.error("%s", e)
        return EXIT_PRECISION
    except ValueError as e:
        LOGGER.error("%s", e)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
