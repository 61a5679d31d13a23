#!/usr/bin/env python3
"""End-to-end demo: generate a corpus, mine candidates, bootstrap from the
generated seeds, cleanse, and report. Everything lands in <dir>/out/.

Usage:
    python scripts/run_demo_pipeline.py [--dir demo] [--workers 4]
"""

import argparse
import os
import sys

from argclean.cli import main as argclean
from argclean.synthetic import write_demo_files


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dir", default="demo")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    paths = write_demo_files(args.dir)
    out = os.path.join(args.dir, "out")
    workers = ["--workers", str(args.workers)]

    steps = [
        ["mine-candidates", "--config", paths["config"], "--output", out],
        ["bootstrap", "--config", paths["config"], "--seeds", paths["seeds"], "--output", out] + workers,
        ["cleanse", "--config", paths["config"], "--pool", os.path.join(out, "pool.tsv"),
         "--output", out] + workers,
        ["report", "--config", paths["config"], "--log", os.path.join(out, "removals.jsonl"),
         "--output", out],
    ]
    for step in steps:
        print(f"$ argclean {' '.join(step)}", file=sys.stderr)
        rc = argclean(step)
        if rc != 0:
            return rc
    print(f"\nartifacts in {out}/: candidates.tsv pool.tsv bootstrap-stats.tsv "
          f"cleaned.jsonl removals.jsonl cleanse-report.{{txt,json}}")
    print(f"triage the candidates: argclean serve --config {paths['config']} "
          f"--triage {os.path.join(out, 'candidates.tsv')}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
