"""Multi-pattern matching of token n-grams against units.

The index is an Aho-Corasick automaton whose alphabet is whole tokens, so
one pass over a unit's token sequence reports every pool pattern occurring
as a contiguous subsequence. The automaton is immutable after construction
and must agree exactly with the naive `pattern_matches_unit` check; tests
enforce that equivalence against random pools.

Retrieval runs over the corpus's *distinct sentences* (identity: full token
sequence) and expands matches to every occurrence, because pattern
statistics count different sentences while cleansing later operates on
occurrences.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Sequence

from .corpus import Corpus, SentenceKey, Unit, UnitId
from .errors import ConfigError
from .patterns import Pattern, tokens_for_mode

if TYPE_CHECKING:  # pragma: no cover
    from .bootstrap import PatternPool


def pattern_matches_unit(pattern: Pattern, unit: Unit) -> bool:
    """Naive contiguous-subsequence check; the oracle the index must agree with."""
    tokens = tokens_for_mode(unit, pattern.ptype.stopword_mode)
    k = pattern.n
    if k > len(tokens):
        return False
    target = pattern.tokens
    return any(tuple(tokens[i : i + k]) == target for i in range(len(tokens) - k + 1))


class _Node:
    __slots__ = ("children", "fail", "output")

    def __init__(self):
        self.children: dict[str, _Node] = {}
        self.fail: _Node | None = None
        self.output: list[int] = []


class MatchIndex:
    """Aho-Corasick automaton over token sequences for one stopword mode.

    Construction inserts every pattern into a token trie, then a BFS sets
    failure links (longest proper suffix of the current path that is also a
    path from the root) and propagates output lists along them, so shorter
    patterns ending inside longer ones are still reported.
    """

    def __init__(self, patterns: Sequence[Pattern], stopword_mode: str):
        modes = {p.ptype.stopword_mode for p in patterns}
        if modes - {stopword_mode}:
            raise ConfigError(f"patterns mix stopword modes: {sorted(modes)}")
        self.stopword_mode = stopword_mode
        self.patterns: tuple[Pattern, ...] = tuple(patterns)
        self._root = _Node()
        for idx, pattern in enumerate(self.patterns):
            node = self._root
            for token in pattern.tokens:
                node = node.children.setdefault(token, _Node())
            node.output.append(idx)
        self._build_links()

    def _build_links(self) -> None:
        root = self._root
        root.fail = root
        queue: deque[_Node] = deque()
        for child in root.children.values():
            child.fail = root
            queue.append(child)
        while queue:
            current = queue.popleft()
            for token, child in current.children.items():
                fallback = current.fail
                while fallback is not root and token not in fallback.children:
                    fallback = fallback.fail
                child.fail = fallback.children.get(token, root)
                if child.fail is child:
                    child.fail = root
                child.output = child.output + child.fail.output
                queue.append(child)

    def match_tokens(self, tokens: Sequence[str]) -> set[int]:
        """Indices of all patterns occurring contiguously in the token sequence."""
        root = self._root
        node = root
        found: set[int] = set()
        for token in tokens:
            while node is not root and token not in node.children:
                node = node.fail
            node = node.children.get(token, root)
            if node.output:
                found.update(node.output)
        return found

    def match_unit(self, unit: Unit) -> list[Pattern]:
        hits = self.match_tokens(tokens_for_mode(unit, self.stopword_mode))
        return [self.patterns[i] for i in sorted(hits)]


def build_match_index(pool: "PatternPool") -> MatchIndex:
    """Index every pool pattern (both polarities) for one-pass unit queries."""
    patterns = sorted(pool.all_patterns(), key=lambda p: (p.polarity, p.tokens))
    return MatchIndex(patterns, pool.ptype.stopword_mode)


@dataclass
class RetrievedSets:
    """Exhaustive match sets for a pool over a corpus.

    Unit-level sets hold every occurrence; the sentence-level views count
    each distinct sentence once and are what precision estimation and
    candidate mining consume. A unit matching patterns of both polarities
    appears in both sets.
    """

    irrelevant_units: set[UnitId] = field(default_factory=set)
    relevant_units: set[UnitId] = field(default_factory=set)
    per_pattern_matches: dict[Pattern, set[UnitId]] = field(default_factory=dict)
    irrelevant_sentences: set[SentenceKey] = field(default_factory=set)
    relevant_sentences: set[SentenceKey] = field(default_factory=set)
    per_pattern_sentences: dict[Pattern, set[SentenceKey]] = field(default_factory=dict)
    sentence_tokens: dict[SentenceKey, tuple[str, ...]] = field(default_factory=dict)

    def units_of(self, polarity: str) -> set[UnitId]:
        return self.irrelevant_units if polarity == "irrelevance" else self.relevant_units

    def sentences_of(self, polarity: str) -> set[SentenceKey]:
        return self.irrelevant_sentences if polarity == "irrelevance" else self.relevant_sentences


def _chunks(items: list, size: int) -> Iterable[list]:
    for i in range(0, len(items), size):
        yield items[i : i + size]


def match_pairs(sets: RetrievedSets) -> list[tuple[str, str]]:
    """Flatten retrieved sets to ("polarity tokens", "arg_id:position") debug pairs."""
    pairs = []
    for pattern in sorted(sets.per_pattern_matches, key=lambda p: (p.polarity, p.tokens)):
        for arg_id, position in sorted(sets.per_pattern_matches[pattern]):
            pairs.append((f"{pattern.polarity} {pattern.text}", f"{arg_id}:{position}"))
    return pairs


def retrieve_matching_units(
    corpus: Corpus,
    pool: "PatternPool",
    *,
    index: MatchIndex | None = None,
    workers: int = 1,
) -> RetrievedSets:
    """Retrieve the units matching any irrelevance / any relevance pattern.

    The scan parallelizes over chunks of distinct sentences; partial results
    merge by set union, so the outcome is independent of the worker count.
    """
    if index is None:
        index = build_match_index(pool)
    sets = RetrievedSets()
    for pattern in index.patterns:
        sets.per_pattern_matches[pattern] = set()
        sets.per_pattern_sentences[pattern] = set()
    occurrences = corpus.sentence_occurrences()
    entries = list(occurrences.items())

    def scan(chunk: list[tuple[SentenceKey, list[Unit]]]) -> list[tuple[SentenceKey, list[Unit], set[int]]]:
        out = []
        for key, units in chunk:
            tokens = tokens_for_mode(units[0], index.stopword_mode)
            hits = index.match_tokens(tokens)
            if hits:
                out.append((key, units, hits))
        return out

    if workers <= 1 or len(entries) < 2:
        partials = [scan(entries)]
    else:
        from concurrent.futures import ThreadPoolExecutor

        chunk_size = max(1, (len(entries) + workers * 4 - 1) // (workers * 4))
        with ThreadPoolExecutor(max_workers=workers) as pool_exec:
            partials = list(pool_exec.map(scan, _chunks(entries, chunk_size)))

    for partial in partials:
        for key, units, hits in partial:
            unit_ids = [u.unit_id for u in units]
            tokens = tokens_for_mode(units[0], index.stopword_mode)
            sets.sentence_tokens[key] = tokens
            for hit in hits:
                pattern = index.patterns[hit]
                sets.per_pattern_matches[pattern].update(unit_ids)
                sets.per_pattern_sentences[pattern].add(key)
                if pattern.polarity == "irrelevance":
                    sets.irrelevant_units.update(unit_ids)
                    sets.irrelevant_sentences.add(key)
                else:
                    sets.relevant_units.update(unit_ids)
                    sets.relevant_sentences.add(key)
    return sets
