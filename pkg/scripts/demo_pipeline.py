#!/usr/bin/env python3
"""Walk every bundled model through the full pipeline and print a summary.

    python scripts/demo_pipeline.py [--jobs N]
"""

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from ramsplit.modelfile import parse_model  # noqa: E402
from ramsplit.splitdrv import (  # noqa: E402
    GateError,
    construct_splitting,
    index_is_q,
    resolve_model,
    verify_splitting,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    for path in sorted((ROOT / "models").glob("*.model")):
        model = parse_model(path.read_text(), path.stem)
        model.validate()
        taxonomy = {}
        for nid in sorted(model.graph.nodes):
            kind = model.graph.classify(nid).kind
            taxonomy[kind] = taxonomy.get(kind, 0) + 1
        print(f"== {path.stem}: nodes {taxonomy or '{}'}")
        ok, hot = index_is_q(model)
        if not ok:
            print(f"   index > q (hot: {', '.join(hot)}); pipeline refuses")
            continue
        log = resolve_model(model)
        for ev in log:
            print(f"   surgery: {ev.describe()}")
        try:
            datum = construct_splitting(model)
        except GateError as exc:
            print(f"   gate failure: {exc}")
            continue
        report = verify_splitting(model, datum, jobs=args.jobs)
        nontrivial = {
            cid: repr(v) for cid, v in datum.v.items() if not (v.is_constant and v.constant_value() == 1)
        }
        print(f"   s = {datum.s}; E = { {k: v for k, v in datum.e.items() if v} or 'empty' }")
        if nontrivial:
            print(f"   gluing units: {nontrivial}")
        print(f"   verification: {'pass' if report.overall else 'FAIL'} "
              f"({len(report.records)} sites)")


if __name__ == "__main__":
    main()
