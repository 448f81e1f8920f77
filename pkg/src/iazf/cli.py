"""Command-line surface: every verification with machine-readable output.

Exit codes: 0 success / all checks pass, 1 verification failure,
2 usage error (argparse's convention).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .assignment import (
    build_assignment_table,
    render_table,
    table_from_dict,
    validate_table,
)
from .converse import sdof_upper_closed_form, verify_counts
from .core import Nodes, SystemParams, k_subsets, node_set
from .field import DEFAULT_MODULUS, PrimeField
from .independence import (
    k5_block_structure_check,
    special_realization_report,
    verify_all_independence,
    verify_independence,
)
from .tradeoff import consistency_check, decimal, tradeoff_curve
from .zfmodel import verify_zero_forcing

ENV_MODULUS = "IAZF_FIELD_MODULUS"


@dataclass
class RunConfig:
    command: str
    K: int = 0
    label: Nodes | None = None
    trials: int = 3
    seed: int = 42
    field_modulus: int = DEFAULT_MODULUS
    format: str = "json"
    output: str | None = None
    k_min: int = 5
    k_max: int = 15
    plot_data: bool = False
    input_path: str | None = None
    max_pairs: int | None = None


def _parse_label(text: str | None) -> Nodes | None:
    if text is None:
        return None
    try:
        return node_set(int(v) for v in text.split(","))
    except ValueError as exc:
        raise ValueError(f"bad label {text!r}: {exc}") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iazf",
        description="Exact verification of the IA/ZF precoding assignment, "
        "its algebraic independence, and the delivery-time tradeoff.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, trials_default: int = 3) -> None:
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--trials", type=int, default=trials_default)
        p.add_argument(
            "--field-modulus",
            type=int,
            default=int(os.environ.get(ENV_MODULUS, DEFAULT_MODULUS)),
        )
        p.add_argument("--output", default=None)

    p = sub.add_parser("assign", help="render the assignment table(s) for one K")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", default=None, help="comma-separated label nodes; omit for all")
    p.add_argument("--format", choices=("markdown", "csv", "json"), default="markdown")
    p.add_argument("--output", default=None)

    p = sub.add_parser("validate", help="validate built tables or a table JSON file")
    p.add_argument("--k", type=int)
    p.add_argument("--l", default=None)
    p.add_argument("--input", dest="input_path", default=None, help="table JSON to validate")
    p.add_argument("--output", default=None)

    p = sub.add_parser("zf-check", help="exact zero-forcing identity at random points")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", default=None)
    common(p, trials_default=100)

    p = sub.add_parser("verify-independence", help="Jacobian full-rank certification")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", default=None)
    common(p)

    p = sub.add_parser("k5-blocks", help="five-node structural block checks")
    common(p, trials_default=100)

    p = sub.add_parser("tradeoff", help="exact tradeoff curve with converse bound")
    p.add_argument("--k-min", type=int, default=5)
    p.add_argument("--k-max", type=int, default=15)
    p.add_argument("--format", choices=("markdown", "csv", "json"), default="csv")
    p.add_argument("--plot-data", action="store_true", help="emit K,delta_ach,delta_lb only")
    p.add_argument("--output", default=None)

    p = sub.add_parser("converse-count", help="enumerate the converse bounding sets")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-pairs", type=int, default=None)
    p.add_argument("--output", default=None)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in (
        "seed", "trials", "field_modulus", "format", "output",
        "k_min", "k_max", "plot_data", "input_path", "max_pairs",
    ):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "k", None) is not None:
        cfg.K = args.k
    if getattr(args, "l", None) is not None:
        cfg.label = _parse_label(args.l)
    return cfg


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _labels(cfg: RunConfig, params: SystemParams) -> list[Nodes]:
    if cfg.label is not None:
        return [cfg.label]
    return k_subsets(params.nodes, params.label_size)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _cmd_assign(cfg: RunConfig) -> int:
    params = SystemParams(cfg.K)
    tables = [build_assignment_table(params, lab) for lab in _labels(cfg, params)]
    if cfg.format == "json":
        payload = tables[0].to_dict() if len(tables) == 1 else [t.to_dict() for t in tables]
        _emit(_json(payload), cfg)
        return 0
    chunks = []
    for t in tables:
        if len(tables) > 1:
            chunks.append("label {%s}\n" % ",".join(str(v) for v in t.label))
        chunks.append(render_table(t, cfg.format))
        if len(tables) > 1:
            chunks.append("\n")
    _emit("".join(chunks), cfg)
    return 0


def _cmd_validate(cfg: RunConfig) -> int:
    results = []
    if cfg.input_path:
        with open(cfg.input_path) as fh:
            table = table_from_dict(json.load(fh))
        report = validate_table(table)
        results.append((table.label, report))
    else:
        params = SystemParams(cfg.K)
        for lab in _labels(cfg, params):
            results.append((lab, validate_table(build_assignment_table(params, lab))))
    payload = {
        "all_valid": all(rep.valid for _, rep in results),
        "tables": [
            {"label": list(lab), "valid": rep.valid, "violations": rep.violations}
            for lab, rep in results
        ],
    }
    _emit(_json(payload), cfg)
    return 0 if payload["all_valid"] else 1


def _cmd_zf_check(cfg: RunConfig) -> int:
    params = SystemParams(cfg.K)
    fld = PrimeField(cfg.field_modulus)
    reports = []
    for lab in _labels(cfg, params):
        table = build_assignment_table(params, lab)
        reports.append(verify_zero_forcing(table, cfg.trials, cfg.seed, fld))
    payload = {
        "all_passed": all(r.passed for r in reports),
        "tables": [
            {
                "label": list(r.label),
                "trials": r.trials,
                "checks": r.checks,
                "failures": r.failures,
                "messages": r.messages,
            }
            for r in reports
        ],
    }
    _emit(_json(payload), cfg)
    return 0 if payload["all_passed"] else 1


def _cmd_verify_independence(cfg: RunConfig) -> int:
    params = SystemParams(cfg.K)
    fld = PrimeField(cfg.field_modulus)
    if cfg.label is not None:
        reports = [verify_independence(params, cfg.label, cfg.trials, cfg.seed, fld)]
    else:
        reports = verify_all_independence(params, cfg.trials, cfg.seed, fld)
    payload = {
        "all_full_rank": all(r.full_rank for r in reports),
        "reports": [r.to_dict() for r in reports],
    }
    _emit(_json(payload), cfg)
    return 0 if payload["all_full_rank"] else 1


def _cmd_k5_blocks(cfg: RunConfig) -> int:
    fld = PrimeField(cfg.field_modulus)
    report = k5_block_structure_check(seed=cfg.seed, points=cfg.trials, fld=fld)
    special = special_realization_report(seed=cfg.seed, fld=fld)
    payload = {
        "points_requested": report.points_requested,
        "points_checked": report.points_checked,
        "resamples": report.resamples,
        "violations": report.violations,
        "passed": report.passed,
        "special_realization": special,
    }
    _emit(_json(payload), cfg)
    ok = (
        report.passed
        and special.get("solved")
        and special.get("diagonal_nonzero")
        and special.get("superdiagonal_zero")
        and special.get("jacobian_rank") == 24
    )
    return 0 if ok else 1


def _cmd_tradeoff(cfg: RunConfig) -> int:
    points = tradeoff_curve(cfg.k_min, cfg.k_max)
    ok = all(p.gap > 0 for p in points) and all(
        consistency_check(SystemParams(p.K)) for p in points if p.certified
    )
    if cfg.plot_data:
        lines = ["K,delta_ach,delta_lb"]
        lines += [
            f"{p.K},{decimal(p.delta_achievable)},{decimal(p.delta_noncoop_lb)}"
            for p in points
        ]
        _emit("\n".join(lines) + "\n", cfg)
        return 0 if ok else 1
    if cfg.format == "json":
        _emit(_json([p.to_dict() for p in points]), cfg)
        return 0 if ok else 1
    if cfg.format == "csv":
        lines = [
            "K,r,delta_ach_num,delta_ach_den,delta_ach,"
            "delta_lb_num,delta_lb_den,delta_lb,gap,certified"
        ]
        for p in points:
            ach, lb = p.delta_achievable, p.delta_noncoop_lb
            lines.append(
                f"{p.K},{p.r},{ach.numerator},{ach.denominator},{decimal(ach)},"
                f"{lb.numerator},{lb.denominator},{decimal(lb)},"
                f"{decimal(p.gap)},{str(p.certified).lower()}"
            )
        _emit("\n".join(lines) + "\n", cfg)
        return 0 if ok else 1
    header = "| K | r | delta_ach | delta_lb | gap | certified |"
    lines = [header, "|---|---|---|---|---|---|"]
    for p in points:
        lines.append(
            f"| {p.K} | {p.r} | {p.delta_achievable} | {p.delta_noncoop_lb} "
            f"| {p.gap} | {str(p.certified).lower()} |"
        )
    _emit("\n".join(lines) + "\n", cfg)
    return 0 if ok else 1


def _cmd_converse_count(cfg: RunConfig) -> int:
    params = SystemParams(cfg.K)
    max_pairs = cfg.max_pairs
    if max_pairs is None and params.K > 9:
        max_pairs = 10
    report = verify_counts(params, max_pairs=max_pairs)
    bound = sdof_upper_closed_form(params)
    payload = report.to_dict()
    payload.update(
        {
            "last_nonempty_position": report.last_nonempty_position,
            "hockey_stick_ok": report.hockey_stick_ok,
            "violations": report.violations,
            "passed": report.passed,
            "sdof_upper_decimal": decimal(bound),
        }
    )
    _emit(_json(payload), cfg)
    return 0 if report.passed else 1


_DISPATCH = {
    "assign": _cmd_assign,
    "validate": _cmd_validate,
    "zf-check": _cmd_zf_check,
    "verify-independence": _cmd_verify_independence,
    "k5-blocks": _cmd_k5_blocks,
    "tradeoff": _cmd_tradeoff,
    "converse-count": _cmd_converse_count,
}


def run(cfg: RunConfig) -> int:
    try:
        return _DISPATCH[cfg.command](cfg)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "validate" and args.k is None and args.input_path is None:
        parser.error("validate needs --k or --input")
    try:
        cfg = _config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
