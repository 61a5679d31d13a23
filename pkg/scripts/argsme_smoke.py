#!/usr/bin/env python3
"""Corpus-scale smoke run against a real args.me dump.

The published corpus-scale figures (pattern-pool sizes, distinct-match
counts, removal totals) depend on the original tokenizer, stopword list,
and the authors' manual seed triage, so they are reference targets to eyeball,
not assertions. This script runs the pipeline on a full args.me JSON file
and prints observed numbers next to the reference ones.

Usage:
    python scripts/argsme_smoke.py --corpus args-me.json --seeds seeds.tsv \
        [--tau 0.95] [--min-irr 200] [--min-rel 2000] [--k-max 20] [--workers 4]

Expect roughly two hours on the full 387k-argument corpus.
"""

import argparse
import sys
import time

from argclean.bootstrap import load_pool, run_bootstrap, save_pool, stats_to_tsv
from argclean.cleanse import cleanse_corpus, write_removal_log
from argclean.corpus import load_corpus

REFERENCE = {
    "irrelevance_patterns": 122,
    "irrelevance_distinct_matches": 52_849,
    "detected_sentences": 86_916,
    "detected_texts": 68_814,
    "removed_sentences": 53_502,
    "removed_texts": 48_089,
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--corpus", required=True, help="args.me JSON dump")
    parser.add_argument("--seeds", required=True, help="seed pool file from triage")
    parser.add_argument("--tau", type=float, default=0.95)
    parser.add_argument("--min-irr", type=int, default=200)
    parser.add_argument("--min-rel", type=int, default=2000)
    parser.add_argument("--k-max", type=int, default=20)
    parser.add_argument("--workers", type=int, default=4)
    parser.add_argument("--out", default="smoke-out")
    args = parser.parse_args()

    t0 = time.perf_counter()
    print("loading corpus ...", file=sys.stderr)
    corpus = load_corpus(args.corpus, "argsme_json")
    print(f"  {len(corpus.texts)} texts, {sum(len(t.units) for t in corpus.texts)} units "
          f"({time.perf_counter() - t0:.0f}s)", file=sys.stderr)

    seeds = load_pool(
        args.seeds,
        tau=args.tau,
        min_freq_irrelevance=args.min_irr,
        min_freq_relevance=args.min_rel,
    )
    pool, trace = run_bootstrap(seeds, corpus, args.k_max, workers=args.workers)
    print(stats_to_tsv(trace))

    import os

    os.makedirs(args.out, exist_ok=True)
    save_pool(pool, os.path.join(args.out, "pool.tsv"))
    cleaned, log = cleanse_corpus(corpus, pool, workers=args.workers)
    write_removal_log(log, os.path.join(args.out, "removals.jsonl"))

    observed = {
        "irrelevance_patterns": pool.size("irrelevance"),
        "irrelevance_distinct_matches": trace[-1].irrelevance_matches,
        "detected_sentences": log.detected_sentences,
        "detected_texts": log.detected_texts,
        "removed_sentences": log.removed_sentences,
        "removed_texts": log.affected_texts,
    }
    print(f"{'metric':35s}{'observed':>12s}{'reference':>12s}")
    for key, reference in REFERENCE.items():
        print(f"{key:35s}{observed[key]:>12d}{reference:>12d}")
    print(f"\ntotal time: {(time.perf_counter() - t0) / 60:.0f} min", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
