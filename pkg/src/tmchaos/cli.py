"""Command-line front end: ``run``, ``iterate``, ``analyze``, ``census``, ``measure``.

Every JSON report is an envelope ``{schema_version, kind, result, manifest,
digest}``. ``digest`` is the SHA-256 of the canonical envelope with the digest
and the manifest timestamp removed, so identical invocations give identical
digests. Each manifest is also appended to a JSONL ``runs.log``.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .census import ENUMERATE, SAMPLE, CensusError, MachineFamily, halting_census
from .debugger import EXHAUSTED, NO, PAPER, SOUND, YES, debug_run
from .machine import MachineError, parse_machine
from .maps import MAPS, DomainError, PrecisionCapExceeded, iterate_exact, iterate_map, map_params
from .measure import (MeasureError, mc_near_diagonal_fraction, near_diagonal_probability,
                      sequence_measure_box)
from .orbits import AnalysisParams, Orbit, classify_orbit

SCHEMA_VERSION = 1
EXIT_OK, EXIT_ERROR, EXIT_LOOP, EXIT_BUDGET = 0, 1, 10, 20
RUN_EXIT = {YES: EXIT_OK, NO: EXIT_LOOP, EXHAUSTED: EXIT_BUDGET}


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def canonical(obj) -> bytes:
    return json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":")).encode()


def report_digest(envelope: dict) -> str:
    body = {k: v for k, v in envelope.items() if k != "digest"}
    body["manifest"] = {k: v for k, v in body["manifest"].items() if k != "timestamp"}
    return hashlib.sha256(canonical(body)).hexdigest()


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def make_manifest(command: str, params: dict, seed, inputs: dict) -> dict:
    return {"command": command, "params": params, "seed": seed,
            "inputs": {str(k): v for k, v in inputs.items()}, "tool_version": __version__,
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds")}


def envelope(kind: str, result: dict, manifest: dict) -> dict:
    env = {"schema_version": SCHEMA_VERSION, "kind": kind, "result": _jsonable(result),
           "manifest": _jsonable(manifest)}
    env["digest"] = report_digest(env)
    return env


def dumps(env: dict) -> str:
    return json.dumps(env, sort_keys=True, indent=2) + "\n"


def log_manifest(env: dict, runs_log: str) -> None:
    if runs_log:
        with open(runs_log, "a") as fh:
            fh.write(json.dumps({"kind": env["kind"], "digest": env["digest"], **env["manifest"]},
                                sort_keys=True) + "\n")


def emit(env: dict, out: str | None, args) -> None:
    text = dumps(env)
    if out:
        Path(out).write_text(text)
    elif not args.quiet:
        sys.stdout.write(text)
    log_manifest(env, args.runs_log)


def _params(args, *names) -> dict:
    return {n: getattr(args, n) for n in names}


# ---------------------------------------------------------------- commands

def cmd_run(args) -> int:
    text = Path(args.machine).read_text(encoding="utf-8")
    spec = parse_machine(text)
    report = debug_run(spec, args.input, args.budget, args.mode)
    if args.trace:
        with open(args.trace, "w") as fh:
            for rec in report.history.records():
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
    manifest = make_manifest("run", _params(args, "input", "budget", "mode"), args.seed,
                             {args.machine: file_digest(args.machine)})
    emit(envelope("debug_report", report.to_dict(), manifest), args.report, args)
    return RUN_EXIT[report.outcome.kind]


def _build_map(args):
    name = args.map
    if name == "babylonian":
        if args.S is None:
            raise CliError("babylonian needs --S")
        return MAPS[name](float(Fraction(args.S)))
    if name == "logistic":
        if args.r is None:
            raise CliError("logistic needs --r")
        return MAPS[name](args.r)
    if name == "affine":
        if args.a is None:
            raise CliError("affine needs --a")
        return MAPS[name](args.a, args.b)
    return MAPS[name]()


def cmd_iterate(args) -> int:
    fmap = _build_map(args)
    x0 = Fraction(args.x0)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if args.exact:
        if args.map != "babylonian":
            raise CliError("--exact is only available for the babylonian map")
        values = iterate_exact(Fraction(args.S), x0, args.steps, args.max_bits)
        writer.writerow(["step", "value", "exact"])
        for n, v in enumerate(values):
            writer.writerow([n, repr(float(v)), str(v)])
        summary = {**map_params(fmap), "x0": args.x0, "steps": args.steps, "samples": len(values),
                   "termination": "Completed", "stopped_at": None, "exact": True}
    else:
        result = iterate_map(fmap, float(x0), args.steps)
        writer.writerow(["step", "value"])
        for n, v in enumerate(result.orbit.samples):
            writer.writerow([n, repr(float(v))])
        summary = {**result.summary(), "exact": False}
    if args.out:
        Path(args.out).write_text(buf.getvalue())
    elif not args.quiet:
        sys.stdout.write(buf.getvalue())
    summary_path = args.summary or (str(Path(args.out).with_suffix(".json")) if args.out else None)
    params = _params(args, "map", "S", "r", "a", "b", "x0", "steps", "exact", "max_bits")
    env = envelope("iteration_summary", summary, make_manifest("iterate", params, args.seed, {}))
    if summary_path:
        Path(summary_path).write_text(dumps(env))
    log_manifest(env, args.runs_log)
    return EXIT_OK


def read_orbit(path) -> Orbit:
    """CSV with a ``value`` column, or a JSONL trace written by ``run --trace``."""
    text = Path(path).read_text()
    first = text.lstrip()[:1]
    if first == "{":
        values, exact = [], []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                num, base, length = int(rec["numerator"]), int(rec["base"]), int(rec["length"])
            except (ValueError, KeyError, TypeError) as exc:
                raise CliError(f"{path}:{lineno}: malformed trace record ({exc})") from None
            values.append(num / base ** length)
            exact.append((num, length))
        return Orbit(np.array(values), precision="exact-rational", bounds=(0.0, 1.0),
                     projection_error=2.0 ** -53, exact=exact)
    reader = csv.DictReader(io.StringIO(text))
    if not reader.fieldnames or "value" not in reader.fieldnames:
        raise CliError(f"{path}: expected a CSV header with a 'value' column")
    values = []
    for lineno, row in enumerate(reader, 2):
        try:
            values.append(float(row["value"]))
        except (TypeError, ValueError):
            raise CliError(f"{path}:{lineno}: bad value {row.get('value')!r}") from None
    return Orbit(np.array(values))


def cmd_analyze(args) -> int:
    orbit = read_orbit(args.orbit)
    if args.bounds:
        orbit.bounds = tuple(args.bounds)
    params = AnalysisParams(epsilon=args.epsilon, gamma=args.gamma, m_min=args.m_min,
                            window=args.window, horizon=args.horizon)
    report = classify_orbit(orbit, params)
    manifest = make_manifest("analyze", {**params.as_dict(), "bounds": args.bounds}, args.seed,
                             {args.orbit: file_digest(args.orbit)})
    emit(envelope("classification_report", report.to_dict(), manifest), args.report, args)
    return EXIT_OK


def cmd_census(args) -> int:
    family = MachineFamily(args.states, args.symbols)
    report = halting_census(family, args.budget, args.mode, args.count, args.seed, args.input_policy,
                            args.detection, cap=args.cap, workers=args.workers)
    params = _params(args, "states", "symbols", "budget", "mode", "count", "input_policy",
                     "detection", "cap")
    emit(envelope("census_report", report.to_dict(), make_manifest("census", params, args.seed, {})),
         args.out, args)
    return EXIT_OK


def cmd_measure(args) -> int:
    if args.seed is None:
        raise CliError("measure needs --seed")
    est = mc_near_diagonal_fraction(args.n, args.delta, args.samples, args.seed)
    oracle = near_diagonal_probability(args.n, args.delta)
    sigma = math.sqrt(oracle * (1 - oracle) / args.samples)
    result = {"n": args.n, "delta": args.delta, "estimate": est.value, "stderr": est.stderr,
              "samples": args.samples, "analytic": oracle, "analytic_stderr": sigma,
              "z": (est.value - oracle) / sigma if sigma > 0 else 0.0,
              "sorted_region_measure": float(sequence_measure_box([0.0] * args.n, [1.0] * args.n).value)}
    params = _params(args, "n", "delta", "samples")
    emit(envelope("measure_report", result, make_manifest("measure", params, args.seed, {})),
         args.out, args)
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="print nothing to stdout")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--runs-log", default="runs.log",
                        help="append-only JSONL ledger of manifests ('' disables)")

    parser = _Parser(prog="tmchaos", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", parents=[common], help="debugger run of a .tm machine")
    p.add_argument("machine")
    p.add_argument("--input", default="")
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--mode", choices=(SOUND, PAPER), default=SOUND)
    p.add_argument("--trace", help="JSONL trace of the history table")
    p.add_argument("--report", help="JSON report path (default stdout)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("iterate", parents=[common], help="iterate a one-dimensional map")
    p.add_argument("map", choices=sorted(MAPS))
    p.add_argument("--S")
    p.add_argument("--r", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--x0", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="exact rationals (babylonian only)")
    p.add_argument("--max-bits", type=int, default=4096, help="denominator bit cap for --exact")
    p.add_argument("--out", help="CSV step,value (default stdout)")
    p.add_argument("--summary", help="JSON summary path (default: --out with .json suffix)")
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("analyze", parents=[common], help="classify an orbit file")
    p.add_argument("orbit")
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--gamma", type=float)
    p.add_argument("--window", type=int)
    p.add_argument("--horizon", type=int)
    p.add_argument("--m-min", type=int, default=8)
    p.add_argument("--bounds", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--report", help="JSON report path (default stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("census", parents=[common], help="budgeted halting census")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--symbols", type=int, required=True)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--mode", choices=(ENUMERATE, SAMPLE), default=ENUMERATE)
    p.add_argument("--count", type=int, help="machines to sample (sample mode)")
    p.add_argument("--input-policy", default="blank", help="'blank' or 'random:<length>'")
    p.add_argument("--detection", choices=(SOUND, PAPER), default=SOUND)
    p.add_argument("--cap", type=int, default=100_000, help="largest family to enumerate")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("measure", parents=[common], help="Monte-Carlo near-diagonal probe")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_measure)
    return parser


def main(argv=None) -> int:
    # trace numerators of long tapes exceed the default int/str digit limit
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, MachineError, DomainError, PrecisionCapExceeded, MeasureError, CensusError,
            OSError, ValueError) as exc:
        print(f"tmchaos {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
