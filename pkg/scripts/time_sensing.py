#!/usr/bin/env python3
"""Wall-time distribution of the digital sensing stage.

Times support detection + slice recovery + carrier estimation on a fixed
snapshot block of the three-transmission demo; synthesis and the analog
front-end simulation stay outside the timed region.
"""

import argparse
import json
from pathlib import Path

from mwcsense.harness import report_csvs, time_sensing
from mwcsense.serialization import validate_report


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repetitions", type=int, default=20)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--bank-seed", type=int, default=0)
    ap.add_argument("--budget-ms", type=float, default=50.0)
    ap.add_argument("--out-dir", default="out/timing")
    args = ap.parse_args()

    report = time_sensing(
        repetitions=args.repetitions, seed=args.seed, bank_seed=args.bank_seed
    )
    doc = report.to_dict()
    validate_report(doc)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(doc, indent=2) + "\n")
    for name, text in report_csvs(report).items():
        (out / name).write_text(text)

    agg = report.aggregates
    rows, cols = agg["matrix_shape"]
    print(
        f"sensing on a {rows}x{cols} matrix, {agg['n_snapshots']} snapshots: "
        f"median {agg['median_s'] * 1e3:.2f} ms, mean {agg['mean_s'] * 1e3:.2f} ms, "
        f"p95 {agg['p95_s'] * 1e3:.2f} ms over {agg['n_trials']} repetitions"
    )
    print(f"wrote {out}/")
    return 0 if agg["median_s"] <= args.budget_ms / 1e3 else 1


if __name__ == "__main__":
    raise SystemExit(main())
