"""Run the bundled demo sets through the full analysis at n = 2 and n = 3.

Prints the human summary for each (set, n) pair and optionally writes the
JSON reports next to each other in --out-dir.

Usage:
    python3 scripts/run_demos.py
    python3 scripts/run_demos.py --out-dir /tmp/demo-reports
"""

import argparse
import pathlib

from mixcomp.cli import analyze_set, format_summary
from mixcomp.comparison import DEFAULT_CAP
from mixcomp.io import dump_json
from mixcomp.linalg import Tolerances
from mixcomp.states import DEMO_NAMES, demo_set


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=pathlib.Path, default=None,
                        help="directory for JSON reports (created if missing)")
    parser.add_argument("--tol", type=float, default=1e-9,
                        help="global tolerance (default 1e-9)")
    args = parser.parse_args()

    if args.out_dir is not None:
        args.out_dir.mkdir(parents=True, exist_ok=True)

    tolerances = Tolerances.from_global(args.tol)
    for name in DEMO_NAMES:
        cs = demo_set(name)
        for n in (2, 3):
            report = analyze_set(cs, n, tolerances, DEFAULT_CAP)
            banner = f"=== {name}  (d={cs.dim}, k={cs.k}, n={n}) ==="
            print(banner)
            print(format_summary(report))
            print()
            if args.out_dir is not None:
                path = args.out_dir / f"{name}_n{n}.json"
                dump_json(report, path)
                print(f"wrote {path}")
                print()


if __name__ == "__main__":
    main()
