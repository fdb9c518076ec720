#!/usr/bin/env python3
"""Rate accounting for a converter config against a scenario.

Prints the full rate report: aggregate sampling rate, ratio to Nyquist,
the 4NB comparison, and the structural checks (chip rate coverage, slice
coverage of the band).
"""

import argparse
import json
from pathlib import Path

from mwcsense import demo_scenario, prototype_config, validate_config
from mwcsense.serialization import config_from_json, scenario_from_json


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="config JSON file (default: prototype preset)")
    ap.add_argument("--scenario", help="scenario JSON file (default: demo mixture)")
    args = ap.parse_args()

    config = (
        config_from_json(Path(args.config).read_text())
        if args.config
        else prototype_config()
    )
    scenario = (
        scenario_from_json(Path(args.scenario).read_text())
        if args.scenario
        else demo_scenario()
    )
    report = validate_config(config, scenario)
    print(json.dumps(report.to_dict(), indent=2))
    print(
        f"\ntotal {report.total_sample_rate_hz / 1e6:.0f} MHz "
        f"= {report.ratio_to_nyquist:.4f} of the {report.nyquist_rate_hz / 1e9:.2f} GHz "
        f"Nyquist rate; 4NB = {report.four_nb_hz / 1e6:.0f} MHz"
    )
    ok = report.chip_rate_pass and report.coverage_pass
    print("structural checks:", "pass" if ok else "FAIL")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
