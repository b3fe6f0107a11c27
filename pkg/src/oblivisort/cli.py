"""Command-line harness.

Exit codes: 0 success or certified, 1 verification failure (or unsorted
output), 2 usage or contract error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import secrets
import sys

from .core import ContractError, RngStream, derive_seed
from .experiments import (
    ALGOS,
    CALIBRATION_FIELDS,
    CSV_FIELDS,
    INPUT_KINDS,
    INPUT_STREAM,
    TrialSpec,
    bench,
    calibration_sweep,
    fit_records,
    pick_preset,
    resolve_mode,
    resolve_schedule,
    run_trial,
)
from .metrics import random_permutation
from .schedule import format_schedule
from .trace import DEFAULT_EXHAUSTION_CAP, Trace, obliviousness_check, verify_zero_one

SEED_ENV = "OBLIVISORT_SEED"


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _budget(text: str):
    if text == "auto":
        return text
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"budget must be an integer or 'auto', got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("budget must be >= 0")
    return value


def _seed(arg: int | None) -> int:
    if arg is not None:
        return arg
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env, 0)
        except ValueError:
            raise ContractError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return secrets.randbits(64)


def _read_keys(path: str) -> list[int]:
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh]
    except OSError as exc:
        raise ContractError(f"cannot read input file {path!r}: {exc.strerror}") from None
    try:
        return [int(ln) for ln in lines if ln]
    except ValueError:
        raise ContractError(f"input file {path!r} must hold one integer per line") from None


def _emit(records, as_json: bool, out) -> None:
    if as_json:
        for r in records:
            out.write(json.dumps(dataclasses.asdict(r)) + "\n")
    else:
        out.write(",".join(CSV_FIELDS) + "\n")
        for r in records:
            out.write(r.csv() + "\n")


def cmd_sort(args, out) -> int:
    keys = _read_keys(args.input) if args.input else None
    if keys is not None:
        if args.n is not None and args.n != len(keys):
            raise ContractError(f"--n {args.n} disagrees with {len(keys)} keys in {args.input}")
        n = len(keys)
    elif args.n is None:
        raise ContractError("give --n or --input")
    else:
        n = args.n
    if n < 1:
        raise ContractError("n must be >= 1")
    if args.trace and args.algo == "bubble":
        raise ContractError("bubble sort does not record traces")
    spec = TrialSpec(args.algo, n, _seed(args.seed), args.input_kind, args.schedule, args.budget)
    recorder = Trace(n) if args.trace else None
    rec, _ = run_trial(spec, keys=keys, recorder=recorder)
    if recorder is not None:
        recorder.write(args.trace)
    _emit([rec], args.json, out)
    return 0 if rec.sorted else 1


def cmd_bench(args, out) -> int:
    if args.fit and len(set(args.sizes)) < 3:
        raise ContractError("--fit needs at least 3 distinct sizes")
    if any(n < 1 for n in args.sizes):
        raise ContractError("sizes must be >= 1")
    if args.trials < 1:
        raise ContractError("--trials must be >= 1")
    records = bench(args.algo, args.sizes, args.trials, _seed(args.seed), args.input_kind,
                    args.schedule, args.budget, args.jobs)
    _emit(records, args.json, out)
    if args.fit:
        fit = fit_records(records)
        if args.json:
            out.write(json.dumps({"fit": dataclasses.asdict(fit)}) + "\n")
        else:
            out.write(f"#fit slope={fit.slope:.6f} intercept={fit.intercept:.6f} r_squared={fit.r_squared:.6f}\n")
    return 0


def cmd_verify(args, out) -> int:
    if args.trace:
        try:
            trace = Trace.read(args.trace)
        except OSError as exc:
            raise ContractError(f"cannot read trace file {args.trace!r}: {exc.strerror}") from None
        result = verify_zero_one(trace, cap=args.cap)
        if result.certified:
            out.write(f"certified wires={trace.n} ops={len(trace)}\n")
            return 0
        out.write("counterexample " + " ".join(map(str, result.counterexample)) + "\n")
        return 1

    if args.algo is None or args.n is None:
        raise ContractError("verify needs --trace FILE, or --algo and --n for an obliviousness check")
    if args.algo not in ("spin", "anneal"):
        raise ContractError("obliviousness checks apply to spin (with --budget) or anneal")
    if args.inputs < 1:
        raise ContractError("--inputs must be >= 1")
    seed = _seed(args.seed)
    if args.algo == "spin":
        config = resolve_mode(args.budget, args.n)
    else:
        config = resolve_schedule(args.schedule, args.n)
    inputs = [[e.key for e in random_permutation(args.n, RngStream(derive_seed(seed, k), INPUT_STREAM))]
              for k in range(args.inputs)]
    if obliviousness_check(config, seed, inputs):
        out.write(f"identical traces across {args.inputs} inputs\n")
        return 0
    out.write(f"traces differ across {args.inputs} inputs\n")
    return 1


def cmd_calibrate(args, out) -> int:
    rows = calibration_sweep(args.sizes, args.c_reps, args.tails, args.trials, _seed(args.seed))
    out.write(",".join(CALIBRATION_FIELDS) + "\n")
    for r in rows:
        out.write(r.csv() + "\n")
    c, tail = pick_preset(rows, args.headroom)
    out.write(f"#preset c_rep={c} tail_rounds={tail}\n")
    return 0


def cmd_schedule(args, out) -> int:
    out.write(format_schedule(resolve_schedule(args.schedule, args.n)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oblivisort", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help=f"master seed (fallback ${SEED_ENV}, then OS entropy)")
        p.add_argument("--schedule", default="preset:practical",
                       help="schedule file, preset:practical or preset:theoretical")
        p.add_argument("--budget", type=_budget, default=None,
                       help="spin: fixed round budget or 'auto'; guess: max comparisons")
        p.add_argument("--json", action="store_true", help="JSON lines instead of CSV")

    p = sub.add_parser("sort", help="run one sort and print its record")
    p.add_argument("--algo", choices=ALGOS, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--input", help="file with one integer key per line")
    p.add_argument("--input-kind", choices=INPUT_KINDS, default="random")
    p.add_argument("--trace", metavar="OUT", help="write the compare-exchange trace here")
    common(p)
    p.set_defaults(func=cmd_sort)

    p = sub.add_parser("bench", help="scaling experiment, one CSV row per trial")
    p.add_argument("--algo", choices=ALGOS, required=True)
    p.add_argument("--sizes", type=_int_list, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--input-kind", choices=INPUT_KINDS, default="random")
    p.add_argument("--fit", action="store_true", help="append a log-log slope fit of mean comparisons")
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="zero-one certification or obliviousness check")
    p.add_argument("--trace", help="trace file to certify over all 0-1 inputs")
    p.add_argument("--cap", type=int, default=DEFAULT_EXHAUSTION_CAP)
    p.add_argument("--algo", choices=ALGOS)
    p.add_argument("--n", type=int)
    p.add_argument("--inputs", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("calibrate", help="failure-rate sweep for the practical preset")
    p.add_argument("--sizes", type=_int_list, default=[256, 1024])
    p.add_argument("--c-reps", type=_int_list, default=[1, 2, 3, 4, 5])
    p.add_argument("--tails", type=_int_list, default=[0])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--headroom", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("schedule", help="print a schedule in file format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--schedule", default="preset:practical")
    p.set_defaults(func=cmd_schedule)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ContractError as exc:
        print(f"oblivisort: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
