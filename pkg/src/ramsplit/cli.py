"""Batch front end: model ingestion, pipeline commands, report emission.

Exit codes: 0 = overall pass, 1 = input error (parse/validation), 2 = gate
failure or failed verification (hot points, chilly loops, infeasible E,
non-pass report).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .curvebr import CurveDataError
from .modelfile import FormatError, parse_model, serialize_datum, serialize_model
from .ramgraph import ModelError
from .splitdrv import (
    GateError,
    construct_splitting,
    index_is_q,
    resolve_model,
    verify_splitting,
)
from .selfcheck import run_suites

EXIT_PASS = 0
EXIT_INPUT = 1
EXIT_GATE = 2


def _load(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    model = parse_model(text, Path(path).stem)
    model.validate()
    return model


def cmd_classify(args) -> int:
    model = _load(args.model)
    for nid in sorted(model.graph.nodes):
        pc = model.graph.classify(nid)
        print(f"node {nid}: {pc.describe()}")
    return EXIT_PASS


def cmd_resolve(args) -> int:
    model = _load(args.model)
    log = resolve_model(model)
    model.validate()
    for ev in log:
        print(f"surgery: {ev.describe()}")
    text = serialize_model(model)
    if args.output:
        Path(args.output).write_text(text)
        print(f"resolved model written to {args.output}")
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def cmd_index(args) -> int:
    model = _load(args.model)
    ok, hot = index_is_q(model)
    if not ok:
        print(f"index > q: hot points [{', '.join(hot)}]")
        return EXIT_GATE
    if not model.graph.ramified_curves():
        print("index = q (trivially)")
    else:
        print("index = q")
    return EXIT_PASS


def cmd_split(args) -> int:
    model = _load(args.model)
    if args.perturb_chilly is not None and not 1 <= args.perturb_chilly < model.q:
        raise FormatError(f"--perturb-chilly must be in 1..{model.q - 1}")
    log = resolve_model(model)
    model.validate()
    for ev in log:
        print(f"surgery: {ev.describe()}")
    try:
        datum = construct_splitting(model, formal=args.formal_mode)
    except GateError as exc:
        print(f"gate failure ({exc.kind}): {exc}")
        return EXIT_GATE
    report = verify_splitting(
        model, datum, perturb_chilly=args.perturb_chilly, jobs=args.jobs
    )
    prefix = args.output or str(Path(args.model).with_suffix(""))
    datum_path = Path(prefix + ".datum")
    report_path = Path(prefix + ".report.txt")
    json_path = Path(prefix + ".report.json")
    datum_path.write_text(serialize_datum(model, datum))
    report_path.write_text(report.to_text())
    json_path.write_text(report.to_json())
    sys.stdout.write(report.to_text())
    print(f"datum -> {datum_path}; report -> {report_path}, {json_path}")
    return EXIT_PASS if report.overall else EXIT_GATE


def cmd_selfcheck(args) -> int:
    results = run_suites(seed=args.seed, only=args.suite)
    if not results:
        print(f"no suite named {args.suite!r}")
        return EXIT_INPUT
    failed = 0
    for name, ok, info in results:
        if ok:
            print(f"suite {name}: pass ({info} checks)")
        else:
            failed += 1
            print(f"suite {name}: FAIL ({info})")
    print(f"{len(results) - failed}/{len(results)} suites passed")
    return EXIT_PASS if failed == 0 else EXIT_GATE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ramsplit",
        description="Ramification of prime-order Brauer classes over arithmetic "
        "surface models: classification, blowup surgery, index criterion, and "
        "construction/verification of cyclic splitting data.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="list the nodal-point taxonomy of a model")
    p.add_argument("model")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("resolve", help="blow up cool points and break chilly loops")
    p.add_argument("model")
    p.add_argument("--output", help="write the transformed model here")
    p.set_defaults(fn=cmd_resolve)

    p = sub.add_parser("index", help="decide the index-q criterion (no hot points)")
    p.add_argument("model")
    p.set_defaults(fn=cmd_index)

    p = sub.add_parser("split", help="resolve, construct a splitting datum, verify it")
    p.add_argument("model")
    p.add_argument("--output", help="output prefix for datum/report files")
    p.add_argument("--perturb-chilly", type=int, default=None, metavar="T",
                   help="verify with chilly exponents perturbed to coefficient T")
    p.add_argument("--formal-mode", action="store_true",
                   help="ignore divisor relations; treat auxiliary classes as free")
    p.add_argument("--jobs", type=int, default=1, help="verification fan-out")
    p.set_defaults(fn=cmd_split)

    p = sub.add_parser("selfcheck", help="run the seeded property suites")
    p.add_argument("--seed", type=int, default=20240)
    p.add_argument("--suite", help="run only the named suite")
    p.set_defaults(fn=cmd_selfcheck)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (FormatError, ModelError, CurveDataError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
