"""Synthetic corpora with planted boilerplate, for end-to-end validation.

The generator builds argument-like texts from a content vocabulary and
plants boilerplate sentences (concatenations of known template phrases) at
the beginning and end of a small fraction of texts. Because the generator
knows exactly which sentences are planted and which phrases exist, the
bootstrap's output can be scored against ground truth: which templates are
covered, and whether any learned irrelevance pattern matches only
non-planted sentences.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .bootstrap import PatternPool
from .corpus import Corpus, SentenceKey, Unit, ArgumentText
from .patterns import (
    POLARITY_IRRELEVANCE,
    POLARITY_RELEVANCE,
    Pattern,
    PatternType,
    contains_subsequence,
)
from .stopwords import default_stopwords


@dataclass
class SyntheticSpec:
    n_texts: int = 20000
    boilerplate_fraction: float = 0.05
    n_templates: int = 20
    template_len: int = 3
    n_topics: int = 30
    content_vocab: int = 400
    sentences_per_text: tuple[int, int] = (3, 6)
    content_len: tuple[int, int] = (6, 11)
    two_phrase_prob: float = 0.7
    contamination_prob: float = 0.3
    rng_seed: int = 7


@dataclass
class GroundTruth:
    templates: list[tuple[str, ...]]
    topics: list[tuple[str, str]]
    planted_keys: set[SentenceKey] = field(default_factory=set)
    planted_unit_ids: set[tuple[str, int]] = field(default_factory=set)

    def covered_templates(self, pool: PatternPool) -> set[int]:
        """Templates containing some learned irrelevance pattern as a sub-n-gram."""
        covered = set()
        for idx, template in enumerate(self.templates):
            for pattern in pool.patterns_of(POLARITY_IRRELEVANCE):
                if pattern.tokens == template or contains_subsequence(template, pattern.tokens):
                    covered.add(idx)
                    break
        return covered

    def patterns_matching_only_unplanted(self, pool: PatternPool, corpus: Corpus) -> list[Pattern]:
        """Learned irrelevance patterns none of whose matches is a planted sentence."""
        bad = []
        for pattern in pool.patterns_of(POLARITY_IRRELEVANCE):
            matches_planted = False
            matches_any = False
            for key in corpus.sentence_occurrences():
                if contains_subsequence(key, pattern.tokens):
                    matches_any = True
                    if key in self.planted_keys:
                        matches_planted = True
                        break
            if matches_any and not matches_planted:
                bad.append(pattern)
        return bad


def _raw_sentence(tokens: list[str]) -> str:
    return " ".join(tokens).capitalize() + "."


def make_synthetic_corpus(spec: SyntheticSpec | None = None) -> tuple[Corpus, GroundTruth]:
    """Generate the corpus and its ground truth; deterministic for a fixed seed."""
    spec = spec or SyntheticSpec()
    rng = random.Random(spec.rng_seed)
    stopwords = default_stopwords()

    boiler_vocab = [f"b{i:02d}" for i in range(spec.n_templates * spec.template_len)]
    templates = [
        tuple(boiler_vocab[i * spec.template_len : (i + 1) * spec.template_len])
        for i in range(spec.n_templates)
    ]
    topics = [(f"t{i:02d}a", f"t{i:02d}b") for i in range(spec.n_topics)]
    content = [f"c{i:03d}" for i in range(spec.content_vocab)]
    truth = GroundTruth(templates, topics)

    def content_sentence() -> list[str]:
        length = rng.randint(*spec.content_len)
        tokens = [rng.choice(content) for _ in range(length)]
        if rng.random() < 0.6:
            a, b = rng.choice(topics)
            pos = rng.randrange(len(tokens) - 1)
            tokens[pos : pos + 2] = [a, b]
        return tokens

    def boilerplate_sentence() -> list[str]:
        k = 2 if rng.random() < spec.two_phrase_prob else 1
        chosen = rng.sample(range(spec.n_templates), k)
        tokens: list[str] = []
        for t in chosen:
            tokens.extend(templates[t])
        if rng.random() < spec.contamination_prob:
            tokens.insert(rng.randrange(len(tokens) + 1), rng.choice(content))
        return tokens

    n_planted_texts = round(spec.n_texts * spec.boilerplate_fraction)
    planted_ids = set(rng.sample(range(spec.n_texts), n_planted_texts))

    texts = []
    for t in range(spec.n_texts):
        arg_id = f"s{t:05d}"
        sentences = [content_sentence() for _ in range(rng.randint(*spec.sentences_per_text))]
        planted_positions: set[int] = set()
        if t in planted_ids:
            n_boiler = rng.randint(1, 3)
            for _ in range(n_boiler):
                if rng.random() < 0.5:
                    sentences.insert(0, boilerplate_sentence())
                    planted_positions = {0} | {p + 1 for p in planted_positions}
                else:
                    sentences.append(boilerplate_sentence())
                    planted_positions.add(len(sentences) - 1)
        units = []
        for pos, tokens in enumerate(sentences, start=1):
            full = tuple(tokens)
            unit = Unit(
                arg_id,
                pos,
                _raw_sentence(tokens),
                full,
                tuple(tok for tok in full if tok not in stopwords),
            )
            units.append(unit)
            if (pos - 1) in planted_positions:
                truth.planted_keys.add(unit.sentence_key)
                truth.planted_unit_ids.add(unit.unit_id)
        body = " ".join(u.raw for u in units)
        texts.append(ArgumentText(arg_id, "", body, "synthetic", units))
    return Corpus(texts, provenance="synthetic"), truth


DEMO_SPEC = SyntheticSpec(
    n_texts=800,
    boilerplate_fraction=0.1,
    n_templates=8,
    template_len=3,
    n_topics=10,
    content_vocab=150,
    rng_seed=13,
)


def write_demo_files(
    directory: str,
    spec: SyntheticSpec | None = None,
    *,
    n_seed_templates: int = 3,
    n_seed_topics: int = 5,
    min_freq_irrelevance: int = 5,
    min_freq_relevance: int = 100,
) -> dict[str, str]:
    """Write a small runnable demo: corpus.jsonl, seeds.tsv, config.toml.

    Returns the paths keyed by role. The demo corpus is JSONL, so the whole
    CLI pipeline can run on it out of the box.
    """
    import json
    import os

    from .bootstrap import save_pool
    from .config import RunConfig, config_to_toml

    spec = spec or DEMO_SPEC
    os.makedirs(directory, exist_ok=True)
    corpus, truth = make_synthetic_corpus(spec)
    corpus_path = os.path.join(directory, "corpus.jsonl")
    with open(corpus_path, "w", encoding="utf-8") as fh:
        for text in corpus.texts:
            fh.write(json.dumps({"id": text.arg_id, "text": text.body}, ensure_ascii=False) + "\n")
    seeds = make_seed_pool(
        truth,
        n_seed_templates=n_seed_templates,
        n_seed_topics=n_seed_topics,
        min_freq_irrelevance=min_freq_irrelevance,
        min_freq_relevance=min_freq_relevance,
    )
    seeds_path = os.path.join(directory, "seeds.tsv")
    save_pool(seeds, seeds_path)
    config = RunConfig(
        corpus_path=corpus_path,
        corpus_format="generic_jsonl",
        min_freq_irrelevance=min_freq_irrelevance,
        min_freq_relevance=min_freq_relevance,
        k_max=10,
        sample_fraction=0.25,
        output_dir=os.path.join(directory, "out"),
    )
    config_path = os.path.join(directory, "config.toml")
    with open(config_path, "w", encoding="utf-8") as fh:
        fh.write(config_to_toml(config))
    return {"corpus": corpus_path, "seeds": seeds_path, "config": config_path}


def make_seed_pool(
    truth: GroundTruth,
    *,
    n_seed_templates: int = 5,
    n_seed_topics: int = 10,
    tau: float = 0.95,
    min_freq_irrelevance: int = 15,
    min_freq_relevance: int = 1000,
    n_min: int = 1,
    n_max: int = 5,
) -> PatternPool:
    """Seeds drawn from the first few planted templates and topic phrases."""
    pool = PatternPool(
        tau=tau,
        min_freq_irrelevance=min_freq_irrelevance,
        min_freq_relevance=min_freq_relevance,
        ptype=PatternType("counts", "without_stopwords"),
        n_min=n_min,
        n_max=n_max,
    )
    for template in truth.templates[:n_seed_templates]:
        pool.add(Pattern(template, POLARITY_IRRELEVANCE, "seed", pool.ptype))
    for a, b in truth.topics[:n_seed_topics]:
        pool.add(Pattern((a, b), POLARITY_RELEVANCE, "seed", pool.ptype))
    return pool
