"""Command line front end.

Exit status: 0 when every requested check passes, 2 when a check fails, 1 on
usage or scenario errors.  Reports go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from .checks import run_checks
from .linfty import DEFAULT_ARITY_CAP
from .report import emit_report
from .scenario import Check, Scenario, ScenarioError, corpus_names, load_corpus, parse_scenario

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2
ARITY_CAP_ENV = "NQLAG_ARITY_CAP"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _default_cap() -> int:
    raw = os.environ.get(ARITY_CAP_ENV)
    if raw is None:
        return DEFAULT_ARITY_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"{ARITY_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise UsageError(f"{ARITY_CAP_ENV} must be positive")
    return cap


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="report format")
    common.add_argument("--arity-cap", type=int, default=None,
                        help=f"highest arity for L-infinity relation checks (default ${ARITY_CAP_ENV} or "
                             f"{DEFAULT_ARITY_CAP})")
    common.add_argument("-v", "--verbose", action="store_true", help="print timings to stderr")

    parser = _Parser(prog="nqlag", description="Deformations of Lagrangian NQ-submanifolds on shifted "
                                               "cotangent charts.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def scenario_cmd(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("scenario", help="scenario file, or the name of a bundled scenario")
        return p

    scenario_cmd("check", "run every check listed in the scenario")
    scenario_cmd("master", "check the master equation {theta, theta} = 0")
    p = scenario_cmd("brackets", "tabulate l^1..l^K on coordinates and check the relations")
    p.add_argument("--arity", type=int, required=True, metavar="K")
    p = scenario_cmd("mc", "Maurer-Cartan residual of an element")
    p.add_argument("--element", required=True)
    p = scenario_cmd("formal", "formal Maurer-Cartan residual of nu*f up to an order")
    p.add_argument("--element", required=True)
    p.add_argument("--order", type=int, required=True)
    p = scenario_cmd("gauge", "gauge vector field l^1_f(lambda)")
    p.add_argument("--f", required=True, dest="f")
    p.add_argument("--lambda", required=True, dest="lam")
    p = scenario_cmd("kuranishi", "Kuranishi obstruction l^2(f, f) of an infinitesimal deformation")
    p.add_argument("--element", required=True)
    p = scenario_cmd("extended", "simultaneous deformation of theta and the zero section")
    p.add_argument("--f", required=True, dest="f")
    p.add_argument("--theta-t", required=True, dest="theta_t")
    p = sub.add_parser("demo", parents=[common], help="bundled end-to-end demonstrations")
    p.add_argument("name", choices=("casimir",))
    sub.add_parser("corpus", help="list the bundled scenarios")
    return parser


def load_scenario(ref: str) -> Scenario:
    if os.path.exists(ref):
        with open(ref, encoding="utf-8") as fh:
            text = fh.read()
        stem = os.path.basename(ref).rsplit(".", 1)[0]
        return parse_scenario(text, stem)
    if ref in corpus_names():
        return load_corpus(ref)
    raise UsageError(f"no such scenario file or bundled scenario: {ref}")


def _requested(args, sc: Scenario) -> List[Check]:
    def need(name, role):
        sc.element(name, role)
        return name

    cmd = args.command
    if cmd == "check":
        return list(sc.checks)
    if cmd == "master":
        return [Check("master")]
    if cmd == "brackets":
        if args.arity < 0:
            raise UsageError("--arity must be non-negative")
        return [Check("brackets", (str(args.arity),))]
    if cmd == "mc":
        return [Check("mc", (need(args.element, "f"),))]
    if cmd == "formal":
        if args.order < 0:
            raise UsageError("--order must be non-negative")
        return [Check("mc-formal", (need(args.element, "f"), str(args.order)))]
    if cmd == "gauge":
        return [Check("gauge", (need(args.f, "f"), need(args.lam, "gauge")))]
    if cmd == "kuranishi":
        return [Check("kuranishi", (need(args.element, "f"),))]
    if cmd == "extended":
        return [Check("extended", (need(args.f, "f"), need(args.theta_t, "ambient")))]
    raise UsageError(f"unknown command {cmd}")


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "corpus":
            for name in corpus_names():
                print(name, file=stdout)
            return EXIT_OK
        cap = args.arity_cap if args.arity_cap is not None else _default_cap()
        if cap < 1:
            raise UsageError("--arity-cap must be positive")
        if args.command == "demo":
            sc = load_corpus("weil-casimir")
            checks = [Check("master"), Check("kuranishi", ("D",))]
        else:
            sc = load_scenario(args.scenario)
            checks = _requested(args, sc)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except ScenarioError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    report = run_checks(sc, checks, arity_cap=cap)
    stdout.write(emit_report(report, args.format))
    if args.verbose:
        for label, secs in report.timings.items():
            print(f"time {label}: {secs:.3f}s", file=stderr)
    for r in report.results:
        if not r.passed:
            print(f"check failed: {r.label}" + (f" ({r.note})" if r.note else ""), file=stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
