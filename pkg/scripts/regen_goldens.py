#!/usr/bin/env python3
"""Regenerate the golden files under tests/golden/ from the bundled models.

Run from the repository root after an intentional behavior change:

    python scripts/regen_goldens.py
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from ramsplit.modelfile import parse_model, serialize_datum, serialize_model  # noqa: E402
from ramsplit.splitdrv import construct_splitting, resolve_model, verify_splitting  # noqa: E402


def main():
    golden = ROOT / "tests" / "golden"
    golden.mkdir(exist_ok=True)
    for name in ("chilly_path", "cold_pair", "mixed", "cool_node", "triangle_loop"):
        model = parse_model((ROOT / "models" / f"{name}.model").read_text(), name)
        model.validate()
        log = resolve_model(model)
        model.validate()
        datum = construct_splitting(model)
        report = verify_splitting(model, datum)
        assert report.overall, name
        (golden / f"{name}.report.txt").write_text(report.to_text())
        (golden / f"{name}.report.json").write_text(report.to_json())
        (golden / f"{name}.datum").write_text(serialize_datum(model, datum))
        if log:
            lines = "".join(ev.describe() + "\n" for ev in log)
            (golden / f"{name}.surgery.log").write_text(lines)
            (golden / f"{name}.resolved.model").write_text(serialize_model(model))
        print(f"regenerated {name}")


if __name__ == "__main__":
    main()
