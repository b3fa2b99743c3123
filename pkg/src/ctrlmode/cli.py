"""Command-line entry point: classify, alter, generate, sweep, oracle-check.

Exit codes: 0 success, 2 no-op (nothing to remove), 1 failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .alter import VerificationError, alter_iterated, write_plan
from .control import CENTRALIZED, DISTRIBUTED, INPUT, REDUNDANT, classify, components
from .digraph import EdgeListError, read_edge_list, write_edge_list
from .generate import ER, SF, GenParams, GeneratorError, generate
from .matching import maximum_matching
from .oracle import OracleRefused, enumerate_matchings
from .sweep import BOTH, SweepConfig, run_sweep, write_csv

log = logging.getLogger("ctrlmode")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_NOOP = 2


class CLIError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are failures, not no-ops
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FAIL, f"{self.prog}: error: {message}\n")


def _load(path):
    g = read_edge_list(path)
    if g.n == 0:
        raise CLIError(f"{path}: empty graph")
    return g


def _emit(text: str, out, quiet: bool) -> None:
    if out:
        Path(out).write_text(text)
    if not quiet:
        sys.stdout.write(text)


def _kv(d: dict) -> str:
    lines = []
    for k, v in d.items():
        if isinstance(v, float):
            v = f"{v:.6g}"
        lines.append(f"{k}={v}")
    return "\n".join(lines) + "\n"


def cmd_classify(args) -> int:
    g = _load(args.path)
    m = maximum_matching(g)
    c = classify(g, m)
    cc = components(g, m, c)
    big_i, big_r = cc.largest(INPUT), cc.largest(REDUNDANT)
    if len(big_i) >= len(big_r):
        cc_size, cc_tag = len(big_i), "I"
    else:
        cc_size, cc_tag = len(big_r), "R"
    report = {
        "n": g.n,
        "L": g.m,
        "k": g.average_degree,
        "nu": c.nu,
        "drivers": len(c.drivers),
        "n_mds": c.n_d,
        "i_d": c.i_d,
        "cc_max": cc_size / g.n,
        "cc_max_size": cc_size,
        "cc_max_type": cc_tag,
        "mode": c.mode,
        "perfect_matching": str(c.perfect_matching).lower(),
    }
    text = _kv(report)
    if args.nodes:
        for v in range(g.n):
            tag = "\tdriver" if v in c.drivers else ""
            text += f"{g.label(v)}\t{c.kind(v)}{tag}\n"
    _emit(text, args.out, args.quiet)
    return EXIT_OK


def cmd_alter(args) -> int:
    g = _load(args.path)
    report, g2 = alter_iterated(
        g,
        args.to,
        iterations=args.iterations,
        break_all_cycles=args.break_all_cycles,
        skip_if_already=not args.force,
    )
    if args.out_plan:
        Path(args.out_plan).write_bytes(write_plan(g, [p for p in report.plans if p.removals] or list(report.plans)))
    if args.out_graph:
        Path(args.out_graph).write_bytes(write_edge_list(g2))
    _emit(report.to_kv(), args.out, args.quiet)
    return EXIT_NOOP if report.n_removed == 0 else EXIT_OK


def cmd_generate(args) -> int:
    g = generate(GenParams(args.n, args.k, args.gamma_in, args.gamma_out, args.seed, args.model))
    data = write_edge_list(g)
    if args.out:
        Path(args.out).write_bytes(data)
    elif not args.quiet:
        sys.stdout.buffer.write(data)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = SweepConfig(
        model=args.model,
        n=args.n,
        k_min=args.k_min,
        k_max=args.k_max,
        k_step=args.k_step,
        reps=args.reps,
        seed=args.seed,
        direction=args.direction,
        gamma_in=args.gamma_in,
        gamma_out=args.gamma_out,
        break_all_cycles=args.break_all_cycles,
    )
    records = run_sweep(cfg, jobs=args.jobs)
    if args.out:
        path = Path(args.out)
        append = args.append and path.exists() and path.stat().st_size > 0
        with open(path, "a" if append else "w", newline="") as fh:
            write_csv(records, fh, header=not append)
    if not args.quiet and not args.out:
        sys.stdout.write(write_csv(records))
    failed = sum(1 for r in records if r.status.startswith("failed"))
    if failed:
        log.warning("%d of %d cells failed to generate", failed, len(records))
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    g = _load(args.path)
    res = enumerate_matchings(g)
    c = classify(g, maximum_matching(g))
    agree = res.nu == c.nu and tuple(res.ever_unmatched) == c.is_input
    report = {
        "n": g.n,
        "nu": res.nu,
        "max_matchings": res.count,
        "oracle_input": " ".join(g.label(v) for v in sorted(res.input_nodes)),
        "classify_input": " ".join(g.label(v) for v in sorted(c.input_nodes)),
        "verdict": "agree" if agree else "DISAGREE",
    }
    _emit(_kv(report), args.out, args.quiet)
    return EXIT_OK if agree else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report/output to this path")
    common.add_argument("--quiet", action="store_true", help="suppress stdout output")
    common.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")

    p = _Parser(prog="ctrlmode", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("classify", parents=[common], help="driver/input/redundant statistics")
    s.add_argument("path")
    s.add_argument("--nodes", action="store_true", help="append per-node kinds")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("alter", parents=[common], help="plan and apply an edge-removal mode switch")
    s.add_argument("path")
    s.add_argument("--to", required=True, choices=[CENTRALIZED, DISTRIBUTED])
    s.add_argument("--iterations", type=int, default=1)
    s.add_argument("--out-plan")
    s.add_argument("--out-graph")
    s.add_argument("--force", action="store_true", help="alter even if already in the target mode")
    s.add_argument("--break-all-cycles", action="store_true")
    s.set_defaults(func=cmd_alter)

    s = sub.add_parser("generate", parents=[common], help="emit a synthetic network")
    s.add_argument("--model", choices=[SF, ER], default=SF)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=float, required=True, help="average total degree 2L/n")
    s.add_argument("--gamma-in", type=float, default=3.0)
    s.add_argument("--gamma-out", type=float, default=3.0)
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("sweep", parents=[common], help="generate/classify/alter over a range of <k>")
    s.add_argument("--model", choices=[SF, ER], default=SF)
    s.add_argument("--n", type=int, default=2000)
    s.add_argument("--k-min", type=float, default=5.0)
    s.add_argument("--k-max", type=float, default=40.0)
    s.add_argument("--k-step", type=float, default=5.0)
    s.add_argument("--reps", type=int, default=20)
    s.add_argument("--direction", choices=[CENTRALIZED, DISTRIBUTED, BOTH], default=BOTH)
    s.add_argument("--gamma-in", type=float, default=3.0)
    s.add_argument("--gamma-out", type=float, default=3.0)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--append", action="store_true", help="append rows to an existing CSV")
    s.add_argument("--break-all-cycles", action="store_true")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("oracle-check", parents=[common], help="compare classify with exhaustive enumeration")
    s.add_argument("path")
    s.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CLIError, EdgeListError, GeneratorError, OracleRefused, OSError, ValueError) as exc:
        print(f"ctrlmode: error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except VerificationError as exc:
        print(f"ctrlmode: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
