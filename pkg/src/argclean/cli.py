"""Command-line pipeline driver.

Subcommands: mine-candidates, serve, bootstrap, cleanse, evaluate, report.
All take --config (TOML) plus overriding flags. Exit codes: 0 success,
1 empty data, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys
import threading

from . import bootstrap as bs
from . import cleanse as cl
from . import evaluation as ev
from .config import RunConfig, load_config
from .corpus import Corpus, load_corpus, sample_corpus
from .errors import ConfigError, DataEmptyError, ParseError
from .patterns import (
    ALL_PATTERN_TYPES,
    read_candidates_tsv,
    top_candidates,
    write_candidates_tsv,
)
from .service import WorkbenchState, make_server
from .stopwords import load_stopwords

EXIT_OK = 0
EXIT_EMPTY = 1
EXIT_CONFIG = 2


class Logger:
    def __init__(self, as_json: bool):
        self.as_json = as_json

    def __call__(self, message: str, **fields):
        if self.as_json:
            print(json.dumps({"msg": message, **fields}), file=sys.stderr)
        else:
            extra = " ".join(f"{k}={v}" for k, v in fields.items())
            print(f"{message}{' ' + extra if extra else ''}", file=sys.stderr)


def _load_config(args) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig()
    if getattr(args, "seed", None) is not None:
        config.rng_seed = args.seed
    if getattr(args, "workers", None) is not None:
        config.workers = args.workers
    if getattr(args, "output", None) is not None:
        config.output_dir = args.output
    return config


def _load_corpus(config: RunConfig) -> Corpus:
    if not config.corpus_path:
        raise ConfigError("no corpus path configured")
    stopwords = load_stopwords(config.stopwords_path) if config.stopwords_path else None
    return load_corpus(
        config.corpus_path,
        config.corpus_format,
        stopwords=stopwords,
        field_mapping=config.field_mapping or None,
        include_conclusions=config.include_conclusions,
    )


def _load_pool(path: str, config: RunConfig) -> bs.PatternPool:
    return bs.load_pool(
        path,
        tau=config.tau,
        min_freq_irrelevance=config.min_freq_irrelevance,
        min_freq_relevance=config.min_freq_relevance,
        ptype=config.ptype,
        n_min=config.n_min,
        n_max=config.n_max,
    )


def cmd_mine_candidates(args, log: Logger) -> int:
    config = _load_config(args)
    corpus = _load_corpus(config)
    if not any(text.units for text in corpus.texts):
        log("no units in corpus", path=config.corpus_path)
        return EXIT_EMPTY
    sample = sample_corpus(corpus, config.sample_fraction, config.rng_seed)
    units = list(sample.units())
    log("mining candidates", texts=len(sample.texts), units=len(units))
    ptypes = ALL_PATTERN_TYPES if args.all_types else (config.ptype,)
    for ptype in ptypes:
        per_n = top_candidates(units, ptype, config.m, range(config.n_min, config.n_max + 1))
        rows = [("", cand) for n in sorted(per_n) for cand in per_n[n]]
        if args.all_types:
            path = config.out(f"candidates.{ptype.key}.tsv")
        else:
            path = args.candidates or config.out("candidates.tsv")
        write_candidates_tsv(path, rows)
        log("wrote candidate table", path=path, rows=len(rows), ptype=ptype.key)
    return EXIT_OK


def cmd_serve(args, log: Logger) -> int:
    config = _load_config(args)
    corpus = _load_corpus(config) if config.corpus_path else None
    state = WorkbenchState(args.state or config.state_dir, corpus)
    if args.triage:
        candidates = read_candidates_tsv(args.triage)
        state.create_triage_session(args.session or "triage", candidates, config.ptype)
        log("triage session ready", session=args.session or "triage", candidates=len(candidates))
    if args.annotate:
        batch = ev.read_annotation_batch(args.annotate)
        state.create_annotation_session(args.session or "annotate", batch)
        log("annotation session ready", session=args.session or "annotate", items=len(batch))
    port = args.port if args.port is not None else config.port
    server = make_server(state, config.host, port, static_dir=args.static or config.static_dir or None)
    host, bound_port = server.server_address[0], server.server_address[1]
    print(f"workbench listening on http://{host}:{bound_port}/", flush=True)

    stop = threading.Event()

    def handle_sigint(signum, frame):
        stop.set()
        threading.Thread(target=server.shutdown, daemon=True).start()

    signal.signal(signal.SIGINT, handle_sigint)
    signal.signal(signal.SIGTERM, handle_sigint)
    server.serve_forever()
    server.server_close()
    log("workbench stopped")
    return EXIT_OK


def cmd_bootstrap(args, log: Logger) -> int:
    config = _load_config(args)
    corpus = _load_corpus(config)
    seeds = _load_pool(args.seeds, config)
    if seeds.size() == 0:
        log("seed pool is empty", path=args.seeds)
        return EXIT_CONFIG
    log(
        "bootstrapping",
        irrelevance_seeds=seeds.size("irrelevance"),
        relevance_seeds=seeds.size("relevance"),
        tau=config.tau,
        k_max=config.k_max,
    )
    pool, trace = bs.run_bootstrap(seeds, corpus, config.k_max, workers=config.workers)
    pool_path = config.out("pool.tsv")
    bs.save_pool(pool, pool_path)
    stats_path = config.out("bootstrap-stats.tsv")
    with open(stats_path, "w", encoding="utf-8") as fh:
        fh.write(bs.stats_to_tsv(trace))
    with open(config.out("bootstrap-stats.json"), "w", encoding="utf-8") as fh:
        json.dump(bs.stats_to_dicts(trace), fh, indent=2, sort_keys=True)
        fh.write("\n")
    log(
        "bootstrap finished",
        iterations=len(trace) - 1,
        irrelevance_patterns=pool.size("irrelevance"),
        relevance_patterns=pool.size("relevance"),
        pool=pool_path,
        stats=stats_path,
    )
    return EXIT_OK


def cmd_cleanse(args, log: Logger) -> int:
    config = _load_config(args)
    corpus = _load_corpus(config)
    pool = _load_pool(args.pool, config)
    if not pool.irrelevance:
        log("pool has no irrelevance patterns", path=args.pool)
        return EXIT_CONFIG
    cleaned, removal_log = cl.cleanse_corpus(
        corpus, pool, workers=config.workers,
        to_fixpoint=args.to_fixpoint or config.cleanse_to_fixpoint,
    )
    suffix = "jsonl" if config.corpus_format == "generic_jsonl" else "json"
    cleaned_path = config.out(f"cleaned.{suffix}")
    cl.write_cleaned_corpus(cleaned, cleaned_path, config.corpus_format)
    log_path = config.out("removals.jsonl")
    cl.write_removal_log(removal_log, log_path)
    texts_hist, pos_hist = ev.irrelevance_histograms(removal_log, corpus)
    report = ev.histogram_report_json(texts_hist, pos_hist, removal_log)
    report_path = config.out("cleanse-report.json")
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    log(
        "cleansing finished",
        detected=removal_log.detected_sentences,
        removed=removal_log.removed_sentences,
        affected_texts=removal_log.affected_texts,
        cleaned=cleaned_path,
        removals=log_path,
        report=report_path,
    )
    return EXIT_OK


def cmd_evaluate(args, log: Logger) -> int:
    config = _load_config(args)
    batch = ev.read_annotation_batch(args.batch)
    records = ev.read_annotations(args.annotations)
    if not batch or not records:
        log("nothing to evaluate")
        return EXIT_EMPTY
    summary = ev.agreement_summary(records, batch)
    try:
        precision = ev.manual_precision_by_stratum(records, batch, n_annotators=args.annotators)
    except Exception as exc:
        log("manual precision unavailable", reason=str(exc))
        precision = {}
    text_report = ev.format_evaluation_report(summary, precision)
    report_path = config.out("evaluation-report.txt")
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(text_report)
    payload = {
        "agreement": summary,
        "manual_precision": {
            stratum: {"majority": majority, "full": full}
            for stratum, (majority, full) in precision.items()
        },
    }
    with open(config.out("evaluation-report.json"), "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(text_report, end="")
    return EXIT_OK


def cmd_report(args, log: Logger) -> int:
    config = _load_config(args)
    corpus = _load_corpus(config)
    removal_log = cl.read_removal_log(args.log)
    texts_hist, pos_hist = ev.irrelevance_histograms(removal_log, corpus)
    text_report = ev.format_histogram_report(texts_hist, pos_hist, removal_log)
    with open(config.out("cleanse-report.txt"), "w", encoding="utf-8") as fh:
        fh.write(text_report)
    with open(config.out("cleanse-report.json"), "w", encoding="utf-8") as fh:
        json.dump(ev.histogram_report_json(texts_hist, pos_hist, removal_log), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(text_report, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="argclean", description=__doc__)
    parser.add_argument("--json", action="store_true", help="machine-readable logs on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="TOML run configuration")
        p.add_argument("--seed", type=int, help="override rng seed")
        p.add_argument("--workers", type=int, help="override worker count")
        p.add_argument("--output", help="override output directory")

    p = sub.add_parser("mine-candidates", help="mine seed-pattern candidates from a corpus sample")
    common(p)
    p.add_argument("--all-types", action="store_true", help="emit tables for all four pattern types")
    p.add_argument("--candidates", help="output path for the candidate table")
    p.set_defaults(func=cmd_mine_candidates)

    p = sub.add_parser("serve", help="run the triage/annotation workbench")
    common(p)
    p.add_argument("--triage", help="candidate TSV to open a triage session for")
    p.add_argument("--annotate", help="annotation batch JSONL to open a session for")
    p.add_argument("--session", help="session name (default: triage/annotate)")
    p.add_argument("--port", type=int, help="override port")
    p.add_argument("--state", help="override state directory")
    p.add_argument("--static", help="directory of built UI assets")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("bootstrap", help="run the bootstrapping loop from a seeds file")
    common(p)
    p.add_argument("--seeds", required=True, help="seed pool file")
    p.set_defaults(func=cmd_bootstrap)

    p = sub.add_parser("cleanse", help="apply an irrelevance pool to the corpus")
    common(p)
    p.add_argument("--pool", required=True, help="pattern pool file")
    p.add_argument("--to-fixpoint", action="store_true",
                   help="repeat passes until re-exposed boilerplate is gone")
    p.set_defaults(func=cmd_cleanse)

    p = sub.add_parser("evaluate", help="agreement and manual precision from annotations")
    common(p)
    p.add_argument("--batch", required=True, help="annotation batch JSONL")
    p.add_argument("--annotations", required=True, help="annotation records JSONL")
    p.add_argument("--annotators", type=int, default=3, help="expected annotators per item")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="histogram report from a removal log")
    common(p)
    p.add_argument("--log", required=True, help="removal log JSONL")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    log = Logger(args.json)
    try:
        return args.func(args, log)
    except (ConfigError, ParseError) as exc:
        log(f"configuration error: {exc}")
        return EXIT_CONFIG
    except DataEmptyError as exc:
        log(f"empty data: {exc}")
        return EXIT_EMPTY
    except FileNotFoundError as exc:
        log(f"missing file: {exc}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
