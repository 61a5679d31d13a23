#!/usr/bin/env python3
"""Generate a runnable demo: synthetic corpus with planted boilerplate,
a matching seed pool, and a ready-to-use config.

Usage:
    python scripts/make_demo_corpus.py --dir demo [--texts 800] [--seed 13]
"""

import argparse

from argclean.synthetic import DEMO_SPEC, SyntheticSpec, write_demo_files


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dir", default="demo", help="output directory")
    parser.add_argument("--texts", type=int, default=DEMO_SPEC.n_texts)
    parser.add_argument("--seed", type=int, default=DEMO_SPEC.rng_seed)
    parser.add_argument("--boilerplate", type=float, default=DEMO_SPEC.boilerplate_fraction,
                        help="fraction of texts that get planted boilerplate")
    args = parser.parse_args()

    spec = SyntheticSpec(
        n_texts=args.texts,
        boilerplate_fraction=args.boilerplate,
        n_templates=DEMO_SPEC.n_templates,
        template_len=DEMO_SPEC.template_len,
        n_topics=DEMO_SPEC.n_topics,
        content_vocab=DEMO_SPEC.content_vocab,
        rng_seed=args.seed,
    )
    paths = write_demo_files(args.dir, spec)
    for role, path in paths.items():
        print(f"{role}: {path}")
    print(f"\nnext: argclean bootstrap --config {paths['config']} --seeds {paths['seeds']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
