"""Corpus cleansing with the positional restriction.

Only irrelevant units before the first and after the last relevant unit of a
text are removed, so the interior of an argument is never torn apart. A text
whose units are all flagged irrelevant is emptied entirely (pure spam).
Relevance patterns play no role here; only the irrelevance pool is applied,
per occurrence, and every detection is logged whether removed or not.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .corpus import ArgumentText, Corpus, UnitId, build_argument_text
from .errors import ConfigError, ParseError
from .matcher import MatchIndex
from .patterns import Pattern
from .stopwords import StopwordList, default_stopwords


@dataclass(frozen=True)
class UnitVerdict:
    unit_id: UnitId
    raw: str
    matched_irrelevance: bool
    removed: bool
    matching_patterns: tuple[Pattern, ...] = ()

    def __post_init__(self):
        if self.removed and not self.matched_irrelevance:
            raise ValueError("a unit can only be removed if it matched an irrelevance pattern")


@dataclass
class RemovalLog:
    """All detections plus totals; detection counts are occurrences, not distinct sentences."""

    verdicts: list[UnitVerdict] = field(default_factory=list)
    detected_sentences: int = 0
    removed_sentences: int = 0
    affected_texts: int = 0  # texts with at least one removal
    detected_texts: int = 0  # texts with at least one detection
    emptied_texts: list[str] = field(default_factory=list)


def classify_unit_removal(text: ArgumentText, irrelevant_flags: Sequence[bool]) -> list[bool]:
    """Removal decision per unit under the prefix/suffix restriction.

    A flagged unit is removed iff it lies before the first unflagged unit or
    after the last one; if every unit is flagged, all are removed.
    """
    if len(irrelevant_flags) != len(text.units):
        raise ConfigError(
            f"{text.arg_id}: got {len(irrelevant_flags)} flags for {len(text.units)} units"
        )
    relevant_positions = [i for i, flagged in enumerate(irrelevant_flags) if not flagged]
    if not relevant_positions:
        return [bool(f) for f in irrelevant_flags]
    first, last = relevant_positions[0], relevant_positions[-1]
    return [bool(f) and (i < first or i > last) for i, f in enumerate(irrelevant_flags)]


def _cleanse_text(
    text: ArgumentText, index: MatchIndex, stopwords: StopwordList
) -> tuple[ArgumentText, list[UnitVerdict], bool]:
    flags = []
    matches = []
    for unit in text.units:
        hit = index.match_unit(unit)
        matches.append(hit)
        flags.append(bool(hit))
    removed = classify_unit_removal(text, flags)
    verdicts = [
        UnitVerdict(
            unit.unit_id,
            unit.raw,
            matched_irrelevance=True,
            removed=removed[i],
            matching_patterns=tuple(matches[i]),
        )
        for i, unit in enumerate(text.units)
        if flags[i]
    ]
    if not any(removed):
        return text, verdicts, False
    surviving = [unit.raw for i, unit in enumerate(text.units) if not removed[i]]
    cleaned = build_argument_text(
        text.arg_id,
        " ".join(surviving),
        conclusion=text.conclusion,
        source=text.source,
        stopwords=stopwords,
    )
    return cleaned, verdicts, not surviving


def cleanse_corpus(
    corpus: Corpus,
    pool,
    *,
    stopwords: StopwordList | None = None,
    workers: int = 1,
    to_fixpoint: bool = False,
) -> tuple[Corpus, RemovalLog]:
    """Apply the irrelevance pool; returns the cleaned corpus and a full log.

    A single pass by default: removing a suffix can expose a new matching
    suffix, and `to_fixpoint` repeats the pass until nothing changes (bounded
    by the longest text). Texts reduced to zero units are retained with an
    empty body and recorded in the log. Surviving units keep their order and
    are renumbered 1..k.
    """
    if to_fixpoint:
        return _cleanse_to_fixpoint(corpus, pool, stopwords=stopwords, workers=workers)
    irrelevance = sorted(pool.irrelevance, key=lambda p: p.tokens)
    if not irrelevance:
        raise ConfigError("cleansing requires at least one irrelevance pattern")
    stopwords = stopwords or default_stopwords()
    index = MatchIndex(irrelevance, pool.ptype.stopword_mode)

    def work(text: ArgumentText) -> tuple[ArgumentText, list[UnitVerdict], bool]:
        return _cleanse_text(text, index, stopwords)

    if workers <= 1:
        results = [work(t) for t in corpus.texts]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool_exec:
            results = list(pool_exec.map(work, corpus.texts))

    log = RemovalLog()
    cleaned_texts = []
    for cleaned, verdicts, emptied in results:
        cleaned_texts.append(cleaned)
        log.verdicts.extend(verdicts)
        if verdicts:
            log.detected_texts += 1
            log.detected_sentences += len(verdicts)
            removed_here = sum(1 for v in verdicts if v.removed)
            log.removed_sentences += removed_here
            if removed_here:
                log.affected_texts += 1
        if emptied:
            log.emptied_texts.append(cleaned.arg_id)
    return Corpus(cleaned_texts, provenance=f"{corpus.provenance} (cleansed)"), log


def _cleanse_to_fixpoint(
    corpus: Corpus, pool, *, stopwords: StopwordList | None, workers: int
) -> tuple[Corpus, RemovalLog]:
    """Repeat single passes until a pass removes nothing.

    Later passes run over re-segmented texts, so their verdict positions do
    not line up with the first pass; only their removals are merged in
    (counted as both detected and removed), keeping the log totals
    consistent.
    """
    current = corpus
    merged: RemovalLog | None = None
    max_units = max((len(t.units) for t in corpus.texts), default=0)
    for _ in range(max(1, max_units)):
        current, log = cleanse_corpus(
            current, pool, stopwords=stopwords, workers=workers, to_fixpoint=False
        )
        if merged is None:
            merged = log
        else:
            merged.verdicts.extend(v for v in log.verdicts if v.removed)
            merged.detected_sentences += log.removed_sentences
            merged.removed_sentences += log.removed_sentences
            merged.emptied_texts.extend(a for a in log.emptied_texts if a not in merged.emptied_texts)
        if log.removed_sentences == 0:
            break
    assert merged is not None
    merged.detected_texts = len({v.unit_id[0] for v in merged.verdicts})
    merged.affected_texts = len({v.unit_id[0] for v in merged.verdicts if v.removed})
    return current, merged


def position_histogram(log: RemovalLog, corpus: Corpus) -> dict[int, tuple[int, int]]:
    """Per sentence position: (detected count, removed count)."""
    hist: dict[int, list[int]] = {}
    for verdict in log.verdicts:
        _, position = verdict.unit_id
        bucket = hist.setdefault(position, [0, 0])
        bucket[0] += 1
        if verdict.removed:
            bucket[1] += 1
    return {pos: (d, r) for pos, (d, r) in sorted(hist.items())}


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def write_removal_log(log: RemovalLog, path: str) -> None:
    """One JSON object per detection: {arg_id, position, raw, patterns, removed}."""
    with open(path, "w", encoding="utf-8") as fh:
        for v in log.verdicts:
            record = {
                "arg_id": v.unit_id[0],
                "position": v.unit_id[1],
                "raw": v.raw,
                "patterns": [p.text for p in v.matching_patterns],
                "removed": v.removed,
            }
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


def read_removal_log(path: str) -> RemovalLog:
    log = RemovalLog()
    texts_detected = set()
    texts_removed = set()
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", line=ln) from exc
            verdict = UnitVerdict(
                (record["arg_id"], record["position"]),
                record.get("raw", ""),
                matched_irrelevance=True,
                removed=bool(record["removed"]),
            )
            log.verdicts.append(verdict)
            log.detected_sentences += 1
            texts_detected.add(record["arg_id"])
            if verdict.removed:
                log.removed_sentences += 1
                texts_removed.add(record["arg_id"])
    log.detected_texts = len(texts_detected)
    log.affected_texts = len(texts_removed)
    return log


def write_cleaned_corpus(corpus: Corpus, path: str, format: str) -> None:
    """Write the cleaned corpus in the input format with stable field order."""
    if format == "generic_jsonl":
        with open(path, "w", encoding="utf-8") as fh:
            for text in corpus.texts:
                fh.write(
                    json.dumps({"id": text.arg_id, "text": text.body}, ensure_ascii=False) + "\n"
                )
    elif format == "argsme_json":
        records = [
            {
                "id": text.arg_id,
                "conclusion": text.conclusion,
                "premises": [{"text": text.body}],
                "context": {"sourceId": text.source},
            }
            for text in corpus.texts
        ]
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"arguments": records}, fh, ensure_ascii=False, indent=2)
            fh.write("\n")
    else:
        raise ConfigError(f"unknown corpus format: {format!r}")


def texts_by_detection_histogram(log: RemovalLog) -> dict[int, int]:
    """Number of texts having a given positive count of detected sentences."""
    per_text: dict[str, int] = {}
    for verdict in log.verdicts:
        per_text[verdict.unit_id[0]] = per_text.get(verdict.unit_id[0], 0) + 1
    hist: dict[int, int] = {}
    for count in per_text.values():
        hist[count] = hist.get(count, 0) + 1
    return dict(sorted(hist.items()))
