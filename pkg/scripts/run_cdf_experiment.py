#!/usr/bin/env python3
"""Run the CDF experiment for a scenario config and write the CSV.

Equivalent to `losmimo run`, kept as a script entry point for quick edits:

    python3 scripts/run_cdf_experiment.py scenarios/reduced.cfg out.csv
"""

import sys
import time

from losmimo import load_config, run_scenario


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__, file=sys.stderr)
        return 1
    cfg = load_config(sys.argv[1])
    start = time.time()
    table, summary = run_scenario(cfg)
    table.write_csv(sys.argv[2])
    print(f"{summary['drops']} drops in {time.time() - start:.1f}s "
          f"({summary['resampled']} re-sampled)")
    for name, vals in table.series.items():
        print(f"  {name}: {len(vals)} samples, median {vals[len(vals) // 2]:.2f} dB")
    return 0


if __name__ == "__main__":
    sys.exit(main())
