"""Lexical n-gram pattern mining and pattern-set maintenance.

Four mining regimes exist, crossing {counts, tfidf} with
{with_stopwords, without_stopwords}. Counts rank n-grams by total
occurrences; TF-IDF ranks by the best single-unit tf*idf, min-max
normalized per n. Redundancy filtering drops any pattern already covered
by a shorter one ("first round acceptance" is covered by "first round").
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Unit
from .errors import ConfigError

POLARITY_RELEVANCE = "relevance"
POLARITY_IRRELEVANCE = "irrelevance"
POLARITIES = (POLARITY_IRRELEVANCE, POLARITY_RELEVANCE)

SCORING_COUNTS = "counts"
SCORING_TFIDF = "tfidf"
WITH_STOPWORDS = "with_stopwords"
WITHOUT_STOPWORDS = "without_stopwords"


@dataclass(frozen=True)
class PatternType:
    """One of the four mining regimes."""

    scoring: str = SCORING_COUNTS
    stopword_mode: str = WITHOUT_STOPWORDS

    def __post_init__(self):
        if self.scoring not in (SCORING_COUNTS, SCORING_TFIDF):
            raise ConfigError(f"unknown scoring {self.scoring!r}")
        if self.stopword_mode not in (WITH_STOPWORDS, WITHOUT_STOPWORDS):
            raise ConfigError(f"unknown stopword mode {self.stopword_mode!r}")

    @property
    def key(self) -> str:
        return f"{self.scoring}_{self.stopword_mode}"

    @classmethod
    def parse(cls, key: str) -> "PatternType":
        scoring, _, mode = key.partition("_")
        return cls(scoring, mode)


ALL_PATTERN_TYPES = tuple(
    PatternType(s, m)
    for s in (SCORING_COUNTS, SCORING_TFIDF)
    for m in (WITH_STOPWORDS, WITHOUT_STOPWORDS)
)


@dataclass(frozen=True)
class Pattern:
    """An n-gram with a polarity and the iteration (or seed step) that produced it."""

    tokens: tuple[str, ...]
    polarity: str
    provenance: str = "seed"  # "seed" or "iter:<i>"
    ptype: PatternType = PatternType()

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("pattern tokens must be nonempty")
        for t in self.tokens:
            if not t or t != t.lower():
                raise ValueError(f"pattern tokens must be nonempty lowercase, got {t!r}")
        if self.polarity not in POLARITIES:
            raise ValueError(f"unknown polarity {self.polarity!r}")

    @property
    def n(self) -> int:
        return len(self.tokens)

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class CandidatePattern:
    tokens: tuple[str, ...]
    n: int
    score: float
    match_count: int  # distinct sentences containing the n-gram
    sample_unit_ids: tuple[tuple[str, int], ...] = ()

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


def tokens_for_mode(unit: Unit, stopword_mode: str) -> tuple[str, ...]:
    if stopword_mode == WITH_STOPWORDS:
        return unit.tokens_full
    if stopword_mode == WITHOUT_STOPWORDS:
        return unit.tokens_content
    raise ConfigError(f"unknown stopword mode {stopword_mode!r}")


def ngram_windows(tokens: Sequence[str], n: int) -> Iterable[tuple[str, ...]]:
    for i in range(len(tokens) - n + 1):
        yield tuple(tokens[i : i + n])


def mine_ngram_counts(units: Iterable[Unit], n: int, stopword_mode: str) -> dict[tuple[str, ...], int]:
    """Total occurrence counts of every contiguous n-token window, over all units."""
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    counts: Counter = Counter()
    for unit in units:
        counts.update(ngram_windows(tokens_for_mode(unit, stopword_mode), n))
    return dict(counts)


def mine_ngram_tfidf(units: Iterable[Unit], n: int, stopword_mode: str) -> dict[tuple[str, ...], float]:
    """Best per-unit tf*idf for each n-gram, min-max normalized to [0, 1].

    Each unit is one document: tf is the occurrence count in the unit, idf is
    ln(N / df). An n-gram occurring in every unit scores 0.
    """
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    units = list(units)
    n_docs = len(units)
    max_tf: dict[tuple[str, ...], int] = {}
    df: Counter = Counter()
    for unit in units:
        tf = Counter(ngram_windows(tokens_for_mode(unit, stopword_mode), n))
        df.update(tf.keys())
        for gram, count in tf.items():
            if count > max_tf.get(gram, 0):
                max_tf[gram] = count
    if not max_tf:
        return {}
    raw = {gram: max_tf[gram] * math.log(n_docs / df[gram]) for gram in max_tf}
    lo = min(raw.values())
    hi = max(raw.values())
    if hi == lo:
        return {gram: 0.0 for gram in raw}
    return {gram: (score - lo) / (hi - lo) for gram, score in raw.items()}


def _sentence_stats(
    units: Sequence[Unit], n: int, stopword_mode: str, sample_size: int
) -> tuple[dict[tuple[str, ...], int], dict[tuple[str, ...], tuple[tuple[str, int], ...]]]:
    """Distinct-sentence match counts and first few occurrence ids per n-gram."""
    seen_keys: dict[tuple[str, ...], set] = {}
    samples: dict[tuple[str, ...], list] = {}
    for unit in units:
        for gram in set(ngram_windows(tokens_for_mode(unit, stopword_mode), n)):
            keys = seen_keys.setdefault(gram, set())
            keys.add(unit.sentence_key)
            ids = samples.setdefault(gram, [])
            if len(ids) < sample_size:
                ids.append(unit.unit_id)
    counts = {gram: len(keys) for gram, keys in seen_keys.items()}
    return counts, {gram: tuple(ids) for gram, ids in samples.items()}


def top_candidates(
    units: Iterable[Unit],
    ptype: PatternType,
    m: int,
    n_range: Iterable[int],
    *,
    sample_size: int = 5,
) -> dict[int, list[CandidatePattern]]:
    """The m best n-grams per n under the given regime.

    Ties break by higher distinct-sentence match count, then lexicographic
    token order, so the ranking is deterministic.
    """
    if m < 1:
        raise ConfigError(f"m must be >= 1, got {m}")
    units = list(units)
    result: dict[int, list[CandidatePattern]] = {}
    for n in n_range:
        if ptype.scoring == SCORING_COUNTS:
            scores = {g: float(c) for g, c in mine_ngram_counts(units, n, ptype.stopword_mode).items()}
        else:
            scores = mine_ngram_tfidf(units, n, ptype.stopword_mode)
        match_counts, samples = _sentence_stats(units, n, ptype.stopword_mode, sample_size)
        ranked = sorted(scores, key=lambda g: (-scores[g], -match_counts[g], g))
        result[n] = [
            CandidatePattern(g, n, scores[g], match_counts[g], samples[g]) for g in ranked[:m]
        ]
    return result


def contains_subsequence(haystack: Sequence[str], needle: Sequence[str]) -> bool:
    """True iff needle occurs in haystack as a contiguous token subsequence."""
    k = len(needle)
    if k == 0 or k > len(haystack):
        return False
    target = tuple(needle)
    return any(tuple(haystack[i : i + k]) == target for i in range(len(haystack) - k + 1))


def redundancy_filter(patterns: Iterable[Pattern]) -> set[Pattern]:
    """Drop every pattern covered by a shorter one in the same set."""
    pool = list(patterns)
    polarities = {p.polarity for p in pool}
    if len(polarities) > 1:
        raise ConfigError("redundancy_filter expects patterns of a single polarity")
    kept = set()
    for p in pool:
        covered = any(
            q.n < p.n and contains_subsequence(p.tokens, q.tokens) for q in pool if q is not p
        )
        if not covered:
            kept.add(p)
    return kept


CANDIDATE_TSV_HEADER = "polarity\ttokens\tn\tscore\tmatch_count"


def format_candidate_row(candidate: CandidatePattern, polarity: str = "") -> str:
    return f"{polarity}\t{candidate.text}\t{candidate.n}\t{candidate.score:.10g}\t{candidate.match_count}"


def write_candidates_tsv(path: str, candidates: Iterable[tuple[str, CandidatePattern]]) -> None:
    """Write the triage table: polarity (may be empty), tokens, n, score, match_count."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CANDIDATE_TSV_HEADER + "\n")
        for polarity, candidate in candidates:
            fh.write(format_candidate_row(candidate, polarity) + "\n")


def read_candidates_tsv(path: str) -> list[tuple[str, CandidatePattern]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != CANDIDATE_TSV_HEADER:
            raise ConfigError(f"{path}: unexpected candidate table header {header!r}")
        for ln, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise ConfigError(f"{path}:{ln}: expected 5 columns, got {len(parts)}")
            polarity, text, n, score, match_count = parts
            tokens = tuple(text.split())
            if len(tokens) != int(n):
                raise ConfigError(f"{path}:{ln}: token count does not match n")
            rows.append(
                (polarity, CandidatePattern(tokens, int(n), float(score), int(match_count)))
            )
    return rows
