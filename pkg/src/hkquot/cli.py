"""Command-line surface: batch analyses over weight-system JSON files.

Subcommands: analyze, classify, kn, metric, hirzebruch.  All output is
deterministic for a fixed configuration and seed; JSON payloads carry
"schema": 1 and validate against the documents shipped in
hkquot/schemas/.  Exit codes: 0 success, 2 precondition or parse error,
3 assertion failure, 4 undecided.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import BoundExceededError, PreconditionError, UndecidedError
from .git_stability import (
    classify_point,
    kahler_strata,
    quotient_compact,
    quotient_smooth,
    unstable_maximal_supports,
)
from .hk_reduction import frame_report_json, horizontal_frame, reduced_form, reduced_metric
from .kempf_ness import solve_hyperkahler, solve_kahler
from .moment_maps import flow_trace
from .rep_core import (
    AmbientPoint,
    CotangentPoint,
    WeightSystem,
    ambient_point_from_json,
    cotangent_point_from_json,
    doubled_weights,
    weight_system_from_json,
    weight_system_to_json,
)
from .scalars import parse_rational
from .strata_examples import hirzebruch_report_text, hirzebruch_suite, hk_candidate_strata

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_ASSERTION = 3
EXIT_UNDECIDED = 4


@dataclass(frozen=True)
class RunConfig:
    mode: str = "exact"
    tol: float = 1e-10
    bound: Optional[int] = None
    seed: int = 0
    threads: int = 1
    fmt: str = "json"
    trace: bool = False


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_PRECONDITION):
        super().__init__(message)
        self.code = code


def _load_json_text(text: str, origin: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(
            f"parse error in {origin} at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None


def _load_json_arg(arg: str, origin: str):
    """Inline JSON when the argument looks like it, else a file path."""
    stripped = arg.lstrip()
    if stripped.startswith(("{", "[")):
        return _load_json_text(arg, origin)
    path = Path(arg)
    if not path.exists():
        raise CliError(f"{origin}: no such file: {arg}")
    return _load_json_text(path.read_text(), str(path))


def _load_weights(arg: str) -> WeightSystem:
    data = _load_json_arg(arg, "weights")
    try:
        return weight_system_from_json(data)
    except (ValueError, TypeError) as exc:
        raise CliError(f"invalid weight system: {exc}") from None


def _numeric_scalar(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise CliError(f"coordinate must be [re, im], got {v!r}")
        return complex(float(parse_rational(v[0])), float(parse_rational(v[1])))
    return complex(float(parse_rational(v)), 0.0)


def _load_point(arg: str, mode: str):
    data = _load_json_arg(arg, "point")
    try:
        if isinstance(data, dict) and "x" in data and "z" in data:
            if mode == "numeric":
                return CotangentPoint.numeric(
                    [_numeric_scalar(v) for v in data["x"]],
                    [_numeric_scalar(v) for v in data["z"]],
                )
            return cotangent_point_from_json(data)
        if not isinstance(data, list):
            raise CliError(f"point must be a list or an x/z object, got {type(data).__name__}")
        if mode == "numeric":
            return AmbientPoint.numeric([_numeric_scalar(v) for v in data])
        return ambient_point_from_json(data)
    except (ValueError, TypeError) as exc:
        raise CliError(f"invalid point: {exc}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(cfg: RunConfig, weights: str) -> dict:
    ws = _load_weights(weights)
    kwargs = {} if cfg.bound is None else {"bound": cfg.bound}
    strata_kwargs = {} if cfg.bound is None else {"bound": cfg.bound}
    smooth, offending = quotient_smooth(ws, **kwargs)
    return {
        "schema": 1,
        "command": "analyze",
        "weight_system": weight_system_to_json(ws),
        "unstable_maximal_supports": [sorted(s) for s in unstable_maximal_supports(ws, **kwargs)],
        "unstable_maximal_supports_cotangent": [
            sorted(s) for s in unstable_maximal_supports(doubled_weights(ws), **kwargs)
        ],
        "compact": quotient_compact(ws),
        "smooth": {
            "smooth": smooth,
            "offending_support": None if offending is None else sorted(offending),
        },
        "kahler_strata": [s.to_json() for s in kahler_strata(ws, **kwargs)],
        "hk_candidates": [c.to_json() for c in hk_candidate_strata(ws, **strata_kwargs)],
    }


def cmd_classify(cfg: RunConfig, weights: str, point: str) -> dict:
    ws = _load_weights(weights)
    p = _load_point(point, cfg.mode)
    if isinstance(p, CotangentPoint):
        ws = doubled_weights(ws)
        p = p.as_doubled_ambient()
    verdict = classify_point(ws, p)
    return {"schema": 1, "command": "classify", "verdict": verdict.to_json()}


def cmd_kn(cfg: RunConfig, weights: str, point: str, hyperkahler: bool) -> dict:
    ws = _load_weights(weights)
    p = _load_point(point, cfg.mode)
    if hyperkahler:
        if not isinstance(p, CotangentPoint):
            raise CliError("--hyperkahler requires an x/z point")
        out = solve_hyperkahler(ws, p, tol=cfg.tol)
        trace_ws, trace_v = doubled_weights(ws), p.as_doubled_ambient()
    else:
        if isinstance(p, CotangentPoint):
            raise CliError("plain kn takes an ambient point; pass --hyperkahler for x/z")
        out = solve_kahler(ws, p, tol=cfg.tol)
        trace_ws, trace_v = ws, p
    payload = {"schema": 1, "command": "kn", "outcome": out.to_json()}
    if cfg.trace:
        xi = out.certificate if out.certificate is not None else out.xi_star
        xi = [0.0] * ws.rank if xi is None else xi
        grid = [float(t) for t in np.linspace(0.0, 30.0, 31)]
        values = flow_trace(trace_ws, trace_v, xi, grid)
        payload["trace"] = {
            "t": grid,
            "value": [float(v) if math.isfinite(v) else "inf" for v in values],
        }
    return payload


def cmd_metric(cfg: RunConfig, weights: str, point: str, pairs: Optional[str]) -> dict:
    ws = _load_weights(weights)
    p = _load_point(point, cfg.mode)
    if not isinstance(p, CotangentPoint):
        p = CotangentPoint.numeric(
            p.to_numeric().coords, np.zeros(p.n, dtype=complex)
        )
    frame = horizontal_frame(ws, p)
    report = frame_report_json(frame)
    report.update({"schema": 1, "command": "metric"})
    if pairs is not None:
        data = _load_json_arg(pairs, "tangent-pairs")
        rows = []
        for entry in data:
            u = frame.project(np.asarray(entry[0], dtype=float))
            v = frame.project(np.asarray(entry[1], dtype=float))
            rows.append(
                {
                    "g": reduced_metric(frame, u, v),
                    "omega_I": reduced_form(frame, "I", u, v),
                    "omega_J": reduced_form(frame, "J", u, v),
                    "omega_K": reduced_form(frame, "K", u, v),
                }
            )
        report["pairs"] = rows
    return report


def _rational_arg(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise CliError(f"invalid rational: {exc}") from None


def cmd_hirzebruch(cfg: RunConfig, n: int, c0: str, c1: str) -> dict:
    report = hirzebruch_suite(n, _rational_arg(c0), _rational_arg(c1), seed=cfg.seed)
    report.update({"schema": 1, "command": "hirzebruch"})
    return report


# ---------------------------------------------------------------------------
# rendering


def _flatten(prefix: str, value, rows: list):
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], rows)
    elif isinstance(value, list):
        for i, item in enumerate(value):
            _flatten(f"{prefix}[{i}]", item, rows)
    else:
        rows.append((prefix, json.dumps(value)))


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2)
    if payload.get("command") == "hirzebruch" and fmt == "table":
        return hirzebruch_report_text(payload)
    rows: list[tuple[str, str]] = []
    _flatten("", payload, rows)
    if fmt == "csv":
        lines = ["key,value"]
        for key, val in rows:
            quoted = '"' + val.replace('"', '""') + '"'
            lines.append(f"{key},{quoted}")
        return "\n".join(lines)
    width = max(len(k) for k, _ in rows) if rows else 0
    return "\n".join(f"{key.ljust(width)}  {val}" for key, val in rows)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hkquot",
        description="Stability, moment-map, and reduction analyses for linear torus actions.",
    )
    parser.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    parser.add_argument("--tol", type=float, default=1e-10)
    parser.add_argument("--bound", type=int, default=None)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--format", choices=("json", "table", "csv"), default="json")
    parser.add_argument("--trace", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full combinatorial report for a weight system")
    p.add_argument("weights")

    p = sub.add_parser("classify", help="stability verdict with certificate")
    p.add_argument("weights")
    p.add_argument("point")

    p = sub.add_parser("kn", help="minimize the Kempf-Ness functional")
    p.add_argument("weights")
    p.add_argument("point")
    p.add_argument("--hyperkahler", action="store_true")

    p = sub.add_parser("metric", help="reduced-frame report at a moment-zero point")
    p.add_argument("weights")
    p.add_argument("point")
    p.add_argument("--pairs", default=None)

    p = sub.add_parser("hirzebruch", help="run the ruled-surface verification suite")
    p.add_argument("n", type=int)
    p.add_argument("c0", nargs="?", default="1")
    p.add_argument("c1", nargs="?", default="1")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    cfg = RunConfig(
        mode=args.mode,
        tol=args.tol,
        bound=args.bound,
        seed=args.seed,
        threads=args.threads,
        fmt=args.format,
        trace=args.trace,
    )
    try:
        if args.command == "analyze":
            payload = cmd_analyze(cfg, args.weights)
        elif args.command == "classify":
            payload = cmd_classify(cfg, args.weights, args.point)
        elif args.command == "kn":
            payload = cmd_kn(cfg, args.weights, args.point, args.hyperkahler)
        elif args.command == "metric":
            payload = cmd_metric(cfg, args.weights, args.point, args.pairs)
        else:
            payload = cmd_hirzebruch(cfg, args.n, args.c0, args.c1)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except (PreconditionError, BoundExceededError, ValueError) as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except UndecidedError as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    print(render(payload, cfg.fmt))
    if payload.get("command") == "hirzebruch" and not payload.get("passed", False):
        return EXIT_ASSERTION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
