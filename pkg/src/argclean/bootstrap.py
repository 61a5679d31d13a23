"""Iterative pattern bootstrapping with precision filtering and revision.

Each iteration: retrieve the units matching the current pool, mine new
candidate n-grams from each polarity's retrieved sentences, add them to the
pool, retrieve again so the candidates' own matches are part of the sets,
then keep exactly the patterns whose estimated precision tp/(tp+fp) clears
the threshold. Previously accepted patterns are re-estimated every time and
may drop out (revision), because the retrieved sets shift as the pool grows.

Precision is estimated over distinct sentences, not occurrences. Seed
patterns are exempt from the minimum-frequency floor (they are human
decisions) but never from the precision threshold.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable

from .corpus import Corpus
from .errors import ConfigError, ParseError
from .matcher import RetrievedSets, retrieve_matching_units
from .patterns import (
    POLARITY_IRRELEVANCE,
    POLARITY_RELEVANCE,
    Pattern,
    PatternType,
    contains_subsequence,
    ngram_windows,
)

TokenKey = tuple[str, ...]

logger = logging.getLogger(__name__)


@dataclass
class PatternPool:
    """The current relevance and irrelevance pattern sets plus configuration."""

    tau: float = 0.95
    min_freq_irrelevance: int = 200
    min_freq_relevance: int = 2000
    ptype: PatternType = field(default_factory=PatternType)
    n_min: int = 1
    n_max: int = 5
    _patterns: dict[str, dict[TokenKey, Pattern]] = field(default_factory=dict, repr=False)
    support: dict[tuple[str, TokenKey], tuple[int, int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not 0.0 < self.tau <= 1.0:
            raise ConfigError(f"tau must be in (0, 1], got {self.tau}")
        if not 1 <= self.n_min <= self.n_max:
            raise ConfigError(f"invalid n range [{self.n_min}, {self.n_max}]")
        for polarity in (POLARITY_IRRELEVANCE, POLARITY_RELEVANCE):
            self._patterns.setdefault(polarity, {})

    @property
    def irrelevance(self) -> frozenset[Pattern]:
        return frozenset(self._patterns[POLARITY_IRRELEVANCE].values())

    @property
    def relevance(self) -> frozenset[Pattern]:
        return frozenset(self._patterns[POLARITY_RELEVANCE].values())

    def patterns_of(self, polarity: str) -> frozenset[Pattern]:
        return frozenset(self._patterns[polarity].values())

    def all_patterns(self) -> list[Pattern]:
        return [p for polarity in (POLARITY_IRRELEVANCE, POLARITY_RELEVANCE) for p in self._patterns[polarity].values()]

    def min_freq(self, polarity: str) -> int:
        return self.min_freq_irrelevance if polarity == POLARITY_IRRELEVANCE else self.min_freq_relevance

    def contains_tokens(self, tokens: TokenKey) -> bool:
        return any(tokens in self._patterns[pol] for pol in self._patterns)

    def add(self, pattern: Pattern, support: tuple[int, int] = (0, 0)) -> None:
        self._patterns[pattern.polarity][pattern.tokens] = pattern
        self.support[(pattern.polarity, pattern.tokens)] = support

    def remove(self, pattern: Pattern) -> None:
        self._patterns[pattern.polarity].pop(pattern.tokens, None)
        self.support.pop((pattern.polarity, pattern.tokens), None)

    def size(self, polarity: str | None = None) -> int:
        if polarity is not None:
            return len(self._patterns[polarity])
        return sum(len(d) for d in self._patterns.values())

    def token_sets(self) -> tuple[frozenset[TokenKey], frozenset[TokenKey]]:
        """(irrelevance token keys, relevance token keys); pool identity for fixpoints."""
        return (
            frozenset(self._patterns[POLARITY_IRRELEVANCE]),
            frozenset(self._patterns[POLARITY_RELEVANCE]),
        )

    def copy(self) -> "PatternPool":
        clone = replace(self, _patterns={}, support=dict(self.support))
        clone._patterns = {pol: dict(pats) for pol, pats in self._patterns.items()}
        return clone

    def empty_like(self) -> "PatternPool":
        return replace(self, _patterns={}, support={})


@dataclass(frozen=True)
class IterationStats:
    """Per-iteration accounting; iteration 0 is the seed row.

    Match counts are distinct sentences matched exclusively by one polarity
    (overlapping sentences are counted for neither), so a growing pool on one
    side can show up as a negative match delta on the other even when that
    side's pattern set is unchanged. Pattern removals through revision are
    reported separately from additions.
    """

    iteration: int
    new_relevance_patterns: int
    removed_relevance_patterns: int
    new_irrelevance_patterns: int
    removed_irrelevance_patterns: int
    relevance_matches: int
    irrelevance_matches: int
    match_delta_relevant: int
    match_delta_irrelevant: int
    mean_est_precision_rel: float | None
    mean_est_precision_irrel: float | None


def pattern_support(pattern: Pattern, sets: RetrievedSets) -> tuple[int, int]:
    """(tp, fp) of a pattern over distinct sentences in the retrieved sets."""
    matched = sets.per_pattern_sentences.get(pattern)
    if matched is None:
        # Pattern not in the index used for retrieval: recount naively over
        # the retrieved sentences.
        matched = {
            key
            for key, tokens in sets.sentence_tokens.items()
            if contains_subsequence(tokens, pattern.tokens)
        }
    own = sets.sentences_of(pattern.polarity)
    other = sets.sentences_of(
        POLARITY_RELEVANCE if pattern.polarity == POLARITY_IRRELEVANCE else POLARITY_IRRELEVANCE
    )
    tp = len(matched & own)
    fp = len(matched & other)
    return tp, fp


def estimate_pattern_precision(pattern: Pattern, sets: RetrievedSets) -> float | None:
    """tp / (tp + fp) over distinct sentences, or None when the pattern matches nothing."""
    tp, fp = pattern_support(pattern, sets)
    if tp + fp == 0:
        return None
    return tp / (tp + fp)


def mine_new_candidates(
    sets: RetrievedSets,
    pool: PatternPool,
    *,
    iteration: int | None = None,
) -> set[Pattern]:
    """Mine candidate patterns from each polarity's retrieved sentences.

    An n-gram qualifies when it occurs in at least the polarity's minimum
    number of distinct retrieved sentences, is not already in the pool, and
    is not covered by any (shorter) pool pattern or shorter co-candidate.
    """
    provenance = "seed" if iteration is None else f"iter:{iteration}"
    pool_tokens = [p.tokens for p in pool.all_patterns()]
    candidates: set[Pattern] = set()
    for polarity in (POLARITY_IRRELEVANCE, POLARITY_RELEVANCE):
        min_freq = pool.min_freq(polarity)
        df: Counter = Counter()
        for key in sets.sentences_of(polarity):
            tokens = sets.sentence_tokens[key]
            grams = set()
            for n in range(pool.n_min, pool.n_max + 1):
                grams.update(ngram_windows(tokens, n))
            df.update(grams)
        frequent = sorted(
            (g for g, c in df.items() if c >= min_freq and not pool.contains_tokens(g)),
            key=lambda g: (len(g), g),
        )
        kept: list[TokenKey] = []
        for gram in frequent:
            if any(len(t) < len(gram) and contains_subsequence(gram, t) for t in pool_tokens):
                continue
            if any(contains_subsequence(gram, t) for t in kept):
                continue
            kept.append(gram)
        for gram in kept:
            candidates.add(Pattern(gram, polarity, provenance, pool.ptype))
    return candidates


def filter_pool(pool_with_candidates: PatternPool, sets: RetrievedSets) -> PatternPool:
    """Keep exactly the patterns estimated at precision >= tau.

    Mined patterns additionally need tp at or above the polarity's minimum
    frequency; seeds are exempt from the floor. Patterns matching nothing
    (tp + fp = 0) are dropped without ever dividing by zero.
    """
    filtered = pool_with_candidates.empty_like()
    for pattern in pool_with_candidates.all_patterns():
        tp, fp = pattern_support(pattern, sets)
        if tp + fp == 0:
            continue
        if tp / (tp + fp) < pool_with_candidates.tau:
            continue
        if pattern.provenance != "seed" and tp < pool_with_candidates.min_freq(pattern.polarity):
            continue
        filtered.add(pattern, (tp, fp))
    return filtered


def _exclusive_matches(pool: PatternPool, sets: RetrievedSets) -> tuple[int, int]:
    """Distinct sentences matched only by irrelevance / only by relevance patterns."""
    irr: set = set()
    rel: set = set()
    for pattern in pool.patterns_of(POLARITY_IRRELEVANCE):
        irr |= sets.per_pattern_sentences.get(pattern, set())
    for pattern in pool.patterns_of(POLARITY_RELEVANCE):
        rel |= sets.per_pattern_sentences.get(pattern, set())
    return len(irr - rel), len(rel - irr)


def _mean_precision(pool: PatternPool, polarity: str) -> float | None:
    values = []
    for pattern in pool.patterns_of(polarity):
        tp, fp = pool.support.get((polarity, pattern.tokens), (0, 0))
        if tp + fp > 0:
            values.append(tp / (tp + fp))
    if not values:
        return None
    return sum(values) / len(values)


def seed_stats(pool: PatternPool, sets: RetrievedSets) -> IterationStats:
    """The iteration-0 row: what the seed pool alone retrieves."""
    for pattern in pool.all_patterns():
        pool.support[(pattern.polarity, pattern.tokens)] = pattern_support(pattern, sets)
    irr_matches, rel_matches = _exclusive_matches(pool, sets)
    return IterationStats(
        iteration=0,
        new_relevance_patterns=pool.size(POLARITY_RELEVANCE),
        removed_relevance_patterns=0,
        new_irrelevance_patterns=pool.size(POLARITY_IRRELEVANCE),
        removed_irrelevance_patterns=0,
        relevance_matches=rel_matches,
        irrelevance_matches=irr_matches,
        match_delta_relevant=rel_matches,
        match_delta_irrelevant=irr_matches,
        mean_est_precision_rel=_mean_precision(pool, POLARITY_RELEVANCE),
        mean_est_precision_irrel=_mean_precision(pool, POLARITY_IRRELEVANCE),
    )


def bootstrap_iteration(
    pool: PatternPool,
    corpus: Corpus,
    *,
    iteration: int = 1,
    workers: int = 1,
    previous_matches: tuple[int, int] | None = None,
) -> tuple[PatternPool, IterationStats]:
    """One retrieve -> mine -> filter step; stats are deltas against the input pool."""
    if pool.size() == 0:
        raise ConfigError("bootstrap requires a nonempty pool in at least one polarity")
    sets_pre = retrieve_matching_units(corpus, pool, workers=workers)
    if previous_matches is None:
        prev_irr, prev_rel = _exclusive_matches(pool, sets_pre)
    else:
        prev_irr, prev_rel = previous_matches
    candidates = mine_new_candidates(sets_pre, pool, iteration=iteration)
    augmented = pool.copy()
    for candidate in candidates:
        augmented.add(candidate)
    sets_aug = retrieve_matching_units(corpus, augmented, workers=workers)
    new_pool = filter_pool(augmented, sets_aug)

    irr_matches, rel_matches = _exclusive_matches(new_pool, sets_aug)
    before_irr, before_rel = pool.token_sets()
    after_irr, after_rel = new_pool.token_sets()
    stats = IterationStats(
        iteration=iteration,
        new_relevance_patterns=len(after_rel - before_rel),
        removed_relevance_patterns=len(before_rel - after_rel),
        new_irrelevance_patterns=len(after_irr - before_irr),
        removed_irrelevance_patterns=len(before_irr - after_irr),
        relevance_matches=rel_matches,
        irrelevance_matches=irr_matches,
        match_delta_relevant=rel_matches - prev_rel,
        match_delta_irrelevant=irr_matches - prev_irr,
        mean_est_precision_rel=_mean_precision(new_pool, POLARITY_RELEVANCE),
        mean_est_precision_irrel=_mean_precision(new_pool, POLARITY_IRRELEVANCE),
    )
    return new_pool, stats


def run_bootstrap(
    seeds: PatternPool,
    corpus: Corpus,
    k_max: int = 20,
    *,
    workers: int = 1,
) -> tuple[PatternPool, list[IterationStats]]:
    """Iterate to a fixpoint or k_max; returns the final pool and the stats trace.

    The trace starts with the seed row. The terminating iteration (the one
    that changed nothing) is included, mirroring how a run is observed.
    """
    if seeds.size() == 0:
        raise ConfigError("seed pool is empty")
    pool = seeds.copy()
    sets_seed = retrieve_matching_units(corpus, pool, workers=workers)
    trace = [seed_stats(pool, sets_seed)]
    prev_matches = (trace[0].irrelevance_matches, trace[0].relevance_matches)
    ever_pooled: dict[TokenKey, str] = {p.tokens: p.polarity for p in pool.all_patterns()}
    for i in range(1, k_max + 1):
        before = pool.token_sets()
        pool, stats = bootstrap_iteration(
            pool, corpus, iteration=i, workers=workers, previous_matches=prev_matches
        )
        trace.append(stats)
        prev_matches = (stats.irrelevance_matches, stats.relevance_matches)
        # Patterns may leave one polarity and re-enter as the other later;
        # allowed, but worth noticing in the logs.
        for pattern in pool.all_patterns():
            previous = ever_pooled.get(pattern.tokens)
            if previous is not None and previous != pattern.polarity:
                logger.info(
                    "polarity flip in iteration %d: %r %s -> %s",
                    i, pattern.text, previous, pattern.polarity,
                )
            ever_pooled[pattern.tokens] = pattern.polarity
        if pool.token_sets() == before:
            break
    return pool, trace


def derive_min_freqs(
    min_seed_matches_in_sample: int,
    corpus_to_sample_ratio: float,
    relevant_to_irrelevant_ratio: float = 10.0,
) -> tuple[int, int]:
    """Scale the candidate frequency floors from seed-sample statistics.

    The irrelevance floor extrapolates the weakest seed's sample matches to
    corpus scale; the relevance floor is multiplied by the estimated
    relevant:irrelevant ratio to keep the two retrieved sets comparable.
    """
    if min_seed_matches_in_sample < 1 or corpus_to_sample_ratio <= 0:
        raise ConfigError("minimum seed matches and scale ratio must be positive")
    irr = max(1, round(min_seed_matches_in_sample * corpus_to_sample_ratio))
    rel = max(1, round(irr * relevant_to_irrelevant_ratio))
    return irr, rel


# ---------------------------------------------------------------------------
# Pool and stats persistence
# ---------------------------------------------------------------------------

def pool_to_lines(pool: PatternPool) -> list[str]:
    """Canonical line form: polarity, n, tokens, provenance, tp, fp (tab-separated)."""
    lines = []
    for pattern in sorted(pool.all_patterns(), key=lambda p: (p.polarity, p.n, p.tokens)):
        tp, fp = pool.support.get((pattern.polarity, pattern.tokens), (0, 0))
        lines.append(
            f"{pattern.polarity}\t{pattern.n}\t{pattern.text}\t{pattern.provenance}\t{tp}\t{fp}"
        )
    return lines


def save_pool(pool: PatternPool, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in pool_to_lines(pool):
            fh.write(line + "\n")


def pool_from_lines(
    lines: Iterable[str],
    *,
    tau: float = 0.95,
    min_freq_irrelevance: int = 200,
    min_freq_relevance: int = 2000,
    ptype: PatternType | None = None,
    n_min: int = 1,
    n_max: int = 5,
    source: str = "<pool>",
) -> PatternPool:
    pool = PatternPool(
        tau=tau,
        min_freq_irrelevance=min_freq_irrelevance,
        min_freq_relevance=min_freq_relevance,
        ptype=ptype or PatternType(),
        n_min=n_min,
        n_max=n_max,
    )
    for ln, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 6:
            raise ParseError(f"{source}: expected 6 tab-separated fields", line=ln)
        polarity, n, text, provenance, tp, fp = parts
        tokens = tuple(text.split())
        if len(tokens) != int(n):
            raise ParseError(f"{source}: token count does not match n", line=ln)
        pattern = Pattern(tokens, polarity, provenance, pool.ptype)
        pool.add(pattern, (int(tp), int(fp)))
    return pool


def load_pool(path: str, **kwargs) -> PatternPool:
    with open(path, encoding="utf-8") as fh:
        return pool_from_lines(fh, source=path, **kwargs)


STATS_TSV_HEADER = (
    "iteration\trel_patterns_new\trel_patterns_removed\trel_matches\trel_match_delta\t"
    "rel_auto_precision\tirr_patterns_new\tirr_patterns_removed\tirr_matches\t"
    "irr_match_delta\tirr_auto_precision"
)


def _fmt_prec(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.4f}"


def stats_to_tsv(trace: Iterable[IterationStats]) -> str:
    rows = [STATS_TSV_HEADER]
    for s in trace:
        label = "seed" if s.iteration == 0 else str(s.iteration)
        rows.append(
            f"{label}\t{s.new_relevance_patterns}\t{s.removed_relevance_patterns}\t"
            f"{s.relevance_matches}\t{s.match_delta_relevant}\t{_fmt_prec(s.mean_est_precision_rel)}\t"
            f"{s.new_irrelevance_patterns}\t{s.removed_irrelevance_patterns}\t"
            f"{s.irrelevance_matches}\t{s.match_delta_irrelevant}\t{_fmt_prec(s.mean_est_precision_irrel)}"
        )
    return "\n".join(rows) + "\n"


def stats_to_dicts(trace: Iterable[IterationStats]) -> list[dict]:
    return [
        {
            "iteration": s.iteration,
            "new_relevance_patterns": s.new_relevance_patterns,
            "removed_relevance_patterns": s.removed_relevance_patterns,
            "new_irrelevance_patterns": s.new_irrelevance_patterns,
            "removed_irrelevance_patterns": s.removed_irrelevance_patterns,
            "relevance_matches": s.relevance_matches,
            "irrelevance_matches": s.irrelevance_matches,
            "match_delta_relevant": s.match_delta_relevant,
            "match_delta_irrelevant": s.match_delta_irrelevant,
            "mean_est_precision_rel": s.mean_est_precision_rel,
            "mean_est_precision_irrel": s.mean_est_precision_irrel,
        }
        for s in trace
    ]
