"""entropylab command line.

    entropylab <trajectory|entropy|at-check|props> --config PATH --out PATH
               [--seed N] [--depth K] [--budget M]

Exit status: 0 on success (or the verdict declared in the config), 1 on a
failed check or an incomplete run, 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from .at_harness import Verdict, at_check
from .config import ExperimentConfig, load_config
from .entropy import _fmt, dyadic_sequence
from .errors import ConfigError, EntropyLabError
from .properties import lemma_property_suite
from .trajectory import trajectory_table

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

TRAJECTORY_COLUMNS = ["n", "cardinality", "cosets_mod_H"]
ENTROPY_COLUMNS = ["k", "two_pow_k", "cardinality", "d_k", "exact_flag"]

# verdicts accepted when the config does not declare one
_PASSING = {Verdict.ADDITIVE_EXACT, Verdict.ADDITIVE_WITHIN_TOLERANCE}


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def run_trajectory(cfg: ExperimentConfig) -> tuple[str, int]:
    X = cfg.exhaustion[cfg.member]
    table = trajectory_table(cfg.phi, X, cfg.n_max, cfg.H, cfg.budget)
    header = TRAJECTORY_COLUMNS if cfg.H is not None else TRAJECTORY_COLUMNS[:2]
    rows = [[r.n, r.cardinality] + ([r.cosets] if cfg.H is not None else []) for r in table.rows]
    return _csv(rows, header), EXIT_FAIL if table.budget_hit else EXIT_OK


def run_entropy(cfg: ExperimentConfig) -> tuple[str, int]:
    X = cfg.exhaustion[cfg.member]
    est = dyadic_sequence(cfg.phi, X, cfg.depth, cfg.budget)
    flag = est.exact_flag()
    rows = [[k, 2**k, c, _fmt(math.log(c) / 2**k), flag] for k, c in est.levels]
    complete = est.depth_reached == cfg.depth
    return _csv(rows, ENTROPY_COLUMNS), EXIT_OK if complete else EXIT_FAIL


def run_at_check(cfg: ExperimentConfig) -> tuple[str, int]:
    if cfg.H is None:
        raise ConfigError("at-check needs a [subgroup] section", "subgroup")
    report = at_check(cfg.family, cfg.phi, cfg.H, cfg.exhaustion, cfg.depth, cfg.tolerance,
                      cfg.budget, cfg.restricted_exhaustion, cfg.growth, seed=cfg.seed)
    doc = {"command": "at-check", "config": cfg.resolved(), "report": report.to_dict()}
    expected = cfg.expected_verdict
    ok = report.verdict == expected if expected is not None else report.verdict in _PASSING
    doc["expected_verdict"] = None if expected is None else expected.value
    doc["passed"] = ok
    return _dump(doc), EXIT_OK if ok else EXIT_FAIL


def run_props(cfg: ExperimentConfig) -> tuple[str, int]:
    rep = lemma_property_suite(cfg.seed, cfg.trials)
    doc = {"command": "props", "config": cfg.resolved(), "report": rep.to_dict()}
    return _dump(doc), EXIT_OK if rep.ok else EXIT_FAIL


COMMANDS = {
    "trajectory": run_trajectory,
    "entropy": run_entropy,
    "at-check": run_at_check,
    "props": run_props,
}


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entropylab",
                                description="Trajectory growth and entropy experiments on group endomorphisms.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="experiment config file")
    p.add_argument("--out", required=True, help="output path, '-' for stdout")
    p.add_argument("--seed", type=_nonneg)
    p.add_argument("--depth", type=_positive)
    p.add_argument("--budget", type=_positive, help="element budget per set (overrides config and environment)")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = load_config(args.config, seed=args.seed, depth=args.depth, budget=args.budget)
        text, status = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"entropylab: config error in {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EntropyLabError as exc:
        print(f"entropylab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return status


if __name__ == "__main__":
    sys.exit(main())
