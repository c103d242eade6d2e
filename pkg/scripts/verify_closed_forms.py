#!/usr/bin/env python3
"""Monte Carlo spot-check of all four closed-form SINRs at a small scale.

    python3 scripts/verify_closed_forms.py [n_symbols]
"""

import sys

from losmimo import ScenarioConfig
from losmimo.scenario import verify


def main() -> int:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 100_000
    cfg = ScenarioConfig(cells=1, antennas_per_cell=8, users_per_cell=2, seed=3)
    report = verify(cfg, n)
    for entry in report.entries:
        print(f"{entry.scheme} {entry.link}: max deviation {entry.max_dev_sigma:.2f} sigma")
    print("PASS" if report.passed else "FAIL")
    return 0 if report.passed else 2


if __name__ == "__main__":
    sys.exit(main())
