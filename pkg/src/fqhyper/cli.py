"""Command line: sweeps, moment reports, histograms and verification suites.

Exit codes: 0 success, 1 verification failure, 2 bad arguments, 3 resource cap.
Configuration comes from flags only.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from . import config
from .field import CapExceeded, FieldError, build_field
from .hypergeom import FAMILIES, sweep
from .moments import ks_and_histogram, moment_report
from .numtheory import is_prime
from .verify import FAIL, SUITES, WARN

EXIT_OK, EXIT_FAIL, EXIT_ARGS, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    p: int | None = None
    r: int = 1
    family: str = "f21"
    m_max: int = 4
    bins: int = 50
    out: str | None = None
    brute_force_cap: int = config.BRUTE_FORCE_CAP
    field_cap: int = config.FIELD_CAP
    tolerances: dict[str, float] = field(default_factory=dict)
    threads: int = 1
    suite: str = "all"
    check: bool = False

    def tol(self, name: str) -> float:
        defaults = {
            "residual": config.ROUNDING_RESIDUAL,
            "ks_f21": config.KS_TOL["f21"],
            "ks_f32": config.KS_TOL["f32"],
            "class_sum_rtol": config.CLASS_SUM_RTOL,
        }
        return self.tolerances.get(name, defaults[name])


def _tolerance(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or name not in config.TOLERANCE_NAMES:
        raise argparse.ArgumentTypeError(
            f"expected NAME=VALUE with NAME in {', '.join(config.TOLERANCE_NAMES)}")
    try:
        v = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value {value!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerances must be positive")
    return name, v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--brute-force-cap", type=_positive, default=config.BRUTE_FORCE_CAP)
    common.add_argument("--field-cap", type=_positive, default=config.FIELD_CAP)
    common.add_argument("--tol", type=_tolerance, action="append", default=[], metavar="NAME=VALUE")

    fieldargs = argparse.ArgumentParser(add_help=False)
    fieldargs.add_argument("--p", type=int, required=True)
    fieldargs.add_argument("--r", type=int, default=1)
    fieldargs.add_argument("--family", choices=FAMILIES, default="f21")

    parser = argparse.ArgumentParser(prog="fqhyper", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common, fieldargs], help="scaled values for every lambda (CSV)")
    mp = sub.add_parser("moments", parents=[common, fieldargs], help="moment reports m = 1..m_max (JSON)")
    mp.add_argument("--m-max", type=_positive, default=4)
    hp = sub.add_parser("hist", parents=[common, fieldargs], help="histogram and KS statistic (CSV)")
    hp.add_argument("--bins", type=int, default=50)
    hp.add_argument("--check", action="store_true", help="exit 1 when KS exceeds its tolerance")
    vp = sub.add_parser("verify", parents=[common], help="run verification suites")
    vp.add_argument("suite", choices=[*SUITES, "all"])
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    args = build_parser().parse_args(argv)
    kw = dict(command=args.command, out=args.out, threads=args.threads,
              brute_force_cap=args.brute_force_cap, field_cap=args.field_cap,
              tolerances=dict(args.tol))
    if args.command == "verify":
        return RunConfig(suite=args.suite, **kw)
    if not is_prime(args.p) or args.p < 5:
        raise UsageError(f"--p must be a prime >= 5, got {args.p}")
    if args.r < 1:
        raise UsageError("--r must be >= 1")
    extra = {}
    if args.command == "moments":
        extra["m_max"] = args.m_max
    if args.command == "hist":
        if args.bins < 2:
            raise UsageError("--bins must be >= 2")
        extra.update(bins=args.bins, check=args.check)
    return RunConfig(p=args.p, r=args.r, family=args.family, **extra, **kw)


# ---------------------------------------------------------------------------

def _g(x: float) -> str:
    return format(float(x), ".17g")


def sweep_csv(cfg: RunConfig) -> tuple[str, int]:
    F = build_field(cfg.p, cfg.r, cap=cfg.field_cap)
    s = sweep(F, cfg.family)
    lines = ["lambda_dlog,lambda_repr,scaled,residual"]
    dlog = F.dlog[s.lambdas].tolist()
    for lam, k, v, res in zip(s.lambdas.tolist(), dlog, s.scaled.tolist(), s.residual.tolist()):
        lines.append(f"{k},{F.repr_element(lam)},{v},{_g(res)}")
    status = EXIT_OK if s.max_residual < cfg.tol("residual") else EXIT_FAIL
    return "\n".join(lines) + "\n", status


CASE4_NOTE = ("odd moment with q = 1 mod 4: the printed class-number formula is matched with "
              "q 2F1(1) = -phi(-1) = -1; taking q 2F1(1) = 1 instead adds 2 to sum_scaled, and for "
              "r even the unknown-coefficient term behaves like (2 sqrt q)^m rather than q^(m/2)")


def moments_json(cfg: RunConfig) -> tuple[str, int]:
    F = build_field(cfg.p, cfg.r, cap=cfg.field_cap)
    s = sweep(F, cfg.family)
    with ThreadPoolExecutor(cfg.threads) as ex:
        reports = list(ex.map(lambda m: moment_report(s, m), range(1, cfg.m_max + 1)))
    entries = []
    for rep in reports:
        extra = {}
        if rep.family == "f21" and rep.m % 2 == 1 and F.q % 4 == 1:
            extra["note"] = CASE4_NOTE
        entries.append("  " + rep.to_json(**extra))
    return "[\n" + ",\n".join(entries) + "\n]\n", EXIT_OK


def hist_csv(cfg: RunConfig) -> tuple[str, int]:
    F = build_field(cfg.p, cfg.r, cap=cfg.field_cap)
    h = ks_and_histogram(sweep(F, cfg.family), cfg.bins)
    status = EXIT_OK
    if cfg.check and h.ks_statistic >= cfg.tol(f"ks_{cfg.family}"):
        status = EXIT_FAIL
    return h.to_csv(), status


def run_verify(cfg: RunConfig) -> tuple[str, int]:
    names = list(SUITES) if cfg.suite == "all" else [cfg.suite]
    lines, status = [], EXIT_OK
    with ThreadPoolExecutor(cfg.threads) as ex:
        for name in names:
            kwargs = {}
            if name in ("schoof", "clausen"):
                kwargs["cap"] = cfg.brute_force_cap
            if name == "identities":
                kwargs["residual"] = cfg.tol("residual")
            if name == "classsums":
                kwargs["rtol"] = cfg.tol("class_sum_rtol")
            for check in SUITES[name](ex.map, **kwargs):
                lines.append(check.line())
                if check.status == FAIL:
                    status = EXIT_FAIL
    n_fail = sum(1 for ln in lines if ln.startswith(FAIL))
    n_warn = sum(1 for ln in lines if ln.startswith(WARN))
    lines.append(f"# {len(lines)} checks, {n_fail} failed, {n_warn} warnings")
    return "\n".join(lines) + "\n", status


COMMANDS = {"sweep": sweep_csv, "moments": moments_json, "hist": hist_csv, "verify": run_verify}


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_config(argv)
    except SystemExit as e:  # argparse: --help or a usage error
        return EXIT_OK if e.code == 0 else EXIT_ARGS
    except UsageError as e:
        print(f"fqhyper: error: {e}", file=sys.stderr)
        return EXIT_ARGS
    try:
        text, status = COMMANDS[cfg.command](cfg)
    except CapExceeded as e:
        print(f"fqhyper: cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except FieldError as e:
        print(f"fqhyper: error: {e}", file=sys.stderr)
        return EXIT_ARGS
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
