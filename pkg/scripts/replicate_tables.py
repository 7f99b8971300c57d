"""Run catalog scenarios and print FP / FN / M / time tables.

    python scripts/replicate_tables.py --scenarios 1.6 2.6 --replicates 100
    python scripts/replicate_tables.py --all --methods wls --replicates 20 --csv out.csv

DC-SIS is O(n^2 p) and dominates the run time on the large scenarios; drop it
from ``--methods`` for a quick pass.
"""

import argparse
import csv
import sys
import time

from wlscreen.bench import CSV_FIELDS, render_table, report_rows, run_scenario
from wlscreen.simgen import DEFAULT_SEED, get_scenario, scenario_catalog


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scenarios", nargs="*", default=["1.6", "2.6", "1.1"])
    ap.add_argument("--all", action="store_true", help="every catalog scenario")
    ap.add_argument("--methods", default="sirs,dcsis,wls")
    ap.add_argument("--replicates", type=int, default=100)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--csv", help="also write all rows to this CSV file")
    args = ap.parse_args(argv)

    ids = [c.id for c in scenario_catalog()] if args.all else args.scenarios
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    rows = []
    for sid in ids:
        cfg = get_scenario(sid).with_(seed=args.seed)
        t0 = time.perf_counter()
        report = run_scenario(cfg, methods, replicates=args.replicates, threads=args.threads)
        print(render_table(report))
        print(f"# {sid}: n={cfg.n} p={cfg.p}, {args.replicates} replicates in "
              f"{time.perf_counter() - t0:.1f} s\n", file=sys.stderr)
        rows.extend(report_rows(report))

    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)


if __name__ == "__main__":
    main()
