"""Agreement metrics, evaluation sampling, and report data.

Chance agreement for the two-annotator coefficient is computed from the
pooled category marginals. That is exactly the two-rater case of the
multi-rater statistic, so the two functions cross-check each other, and it
reproduces the published two-annotator pilot value within rounding.
Degenerate marginals raise a typed signal instead of silently returning 0
or 1.
"""

from __future__ import annotations

import json
import random
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

from .bootstrap import PatternPool
from .cleanse import RemovalLog, position_histogram, texts_by_detection_histogram
from .corpus import Corpus, SentenceKey
from .errors import ConfigError, IncompleteBatchError, KappaUndefined, ParseError
from .matcher import retrieve_matching_units
from .patterns import POLARITY_IRRELEVANCE

LABEL_RELEVANT = "relevant"
LABEL_IRRELEVANT = "irrelevant"
SENTENCE_LABELS = (LABEL_RELEVANT, LABEL_IRRELEVANT)


@dataclass(frozen=True)
class AnnotationRecord:
    """One human label on one target (unit or candidate pattern)."""

    annotator_id: str
    target: str
    label: str
    timestamp: float = 0.0


@dataclass(frozen=True)
class ContingencyTable2x2:
    both_pos: int
    a_only: int
    b_only: int
    both_neg: int

    def __post_init__(self):
        if min(self.both_pos, self.a_only, self.b_only, self.both_neg) < 0:
            raise ValueError("contingency cells must be non-negative")
        if self.total == 0:
            raise ValueError("contingency table must have a positive total")

    @property
    def total(self) -> int:
        return self.both_pos + self.a_only + self.b_only + self.both_neg

    def swapped(self) -> "ContingencyTable2x2":
        return ContingencyTable2x2(self.both_pos, self.b_only, self.a_only, self.both_neg)


def cohen_kappa(table: ContingencyTable2x2) -> float:
    """Two-annotator chance-corrected agreement on a 2x2 contingency table.

    Observed agreement is the diagonal share; expected agreement uses the
    pooled category proportions over both annotators. Returns exactly 1.0
    for perfect agreement.
    """
    n = table.total
    p_o = (table.both_pos + table.both_neg) / n
    if p_o == 1.0:
        return 1.0
    p_pos = (2 * table.both_pos + table.a_only + table.b_only) / (2 * n)
    p_e = p_pos * p_pos + (1.0 - p_pos) * (1.0 - p_pos)
    if p_e == 1.0:
        raise KappaUndefined("degenerate marginals: every label in one category")
    return (p_o - p_e) / (1.0 - p_e)


def fleiss_kappa(counts: Sequence[Sequence[int]]) -> float:
    """Multi-rater chance-corrected agreement.

    `counts` has one row per item and one column per category; every row must
    sum to the same number of raters r >= 2.
    """
    rows = [list(row) for row in counts]
    if not rows:
        raise ConfigError("fleiss_kappa requires at least one item")
    r = sum(rows[0])
    if r < 2:
        raise ConfigError("fleiss_kappa requires at least two raters per item")
    n_cats = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != n_cats or sum(row) != r:
            raise ConfigError(f"item {i}: every item needs exactly {r} labels over {n_cats} categories")
    n = len(rows)
    col_totals = [sum(row[j] for row in rows) for j in range(n_cats)]
    p_cat = [t / (n * r) for t in col_totals]
    p_e = sum(p * p for p in p_cat)
    if p_e == 1.0:
        raise KappaUndefined("degenerate marginals: every label in one category")
    p_items = [(sum(c * c for c in row) - r) / (r * (r - 1)) for row in rows]
    p_mean = sum(p_items) / n
    if p_mean == 1.0:
        return 1.0
    return (p_mean - p_e) / (1.0 - p_e)


def contingency_from_labels(labels_a: Sequence[str], labels_b: Sequence[str], positive: str = LABEL_IRRELEVANT) -> ContingencyTable2x2:
    if len(labels_a) != len(labels_b):
        raise ConfigError("annotators labeled different numbers of items")
    both_pos = a_only = b_only = both_neg = 0
    for la, lb in zip(labels_a, labels_b):
        if la == positive and lb == positive:
            both_pos += 1
        elif la == positive:
            a_only += 1
        elif lb == positive:
            b_only += 1
        else:
            both_neg += 1
    return ContingencyTable2x2(both_pos, a_only, b_only, both_neg)


# ---------------------------------------------------------------------------
# Evaluation sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnnotationItem:
    item_id: str
    text: str
    unit_id: tuple[str, int]
    stratum: str  # "seed" or "iter:<i>"; never exposed to annotators


def _stratum_order(stratum: str) -> tuple[int, int]:
    if stratum == "seed":
        return (0, 0)
    _, _, num = stratum.partition(":")
    return (1, int(num))


def sample_for_annotation(
    pool: PatternPool,
    corpus: Corpus,
    per_iter: int,
    rng_seed: int,
) -> list[AnnotationItem]:
    """Draw a blind evaluation batch, stratified by pattern provenance.

    Each detected sentence is attributed to the earliest iteration whose
    patterns match it; per_iter distinct sentences are drawn per stratum and
    the combined batch order is shuffled. Deterministic under rng_seed.
    """
    if per_iter < 0:
        raise ConfigError(f"per_iter must be >= 0, got {per_iter}")
    if per_iter == 0:
        return []
    sets = retrieve_matching_units(corpus, pool)
    attribution: dict[SentenceKey, str] = {}
    for pattern in pool.patterns_of(POLARITY_IRRELEVANCE):
        for key in sets.per_pattern_sentences.get(pattern, ()):
            current = attribution.get(key)
            if current is None or _stratum_order(pattern.provenance) < _stratum_order(current):
                attribution[key] = pattern.provenance
    strata: dict[str, list[SentenceKey]] = {}
    for key, stratum in attribution.items():
        strata.setdefault(stratum, []).append(key)

    rng = random.Random(rng_seed)
    chosen: list[tuple[str, SentenceKey]] = []
    for stratum in sorted(strata, key=_stratum_order):
        keys = sorted(strata[stratum])
        if len(keys) < per_iter:
            warnings.warn(
                f"stratum {stratum}: only {len(keys)} sentences available, wanted {per_iter}",
                stacklevel=2,
            )
            picked = keys
        else:
            picked = rng.sample(keys, per_iter)
        chosen.extend((stratum, key) for key in sorted(picked))
    rng.shuffle(chosen)

    occurrences = corpus.sentence_occurrences()
    batch = []
    for idx, (stratum, key) in enumerate(chosen):
        unit = occurrences[key][0]
        batch.append(AnnotationItem(f"i{idx:04d}", unit.raw, unit.unit_id, stratum))
    return batch


def write_annotation_batch(batch: Iterable[AnnotationItem], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for item in batch:
            record = {
                "item_id": item.item_id,
                "text": item.text,
                "unit_id": f"{item.unit_id[0]}:{item.unit_id[1]}",
                "stratum": item.stratum,
            }
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


def read_annotation_batch(path: str) -> list[AnnotationItem]:
    batch = []
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", line=ln) from exc
            arg_id, _, position = record["unit_id"].rpartition(":")
            batch.append(
                AnnotationItem(record["item_id"], record["text"], (arg_id, int(position)), record["stratum"])
            )
    return batch


# ---------------------------------------------------------------------------
# Manual precision
# ---------------------------------------------------------------------------

def manual_precision(
    records: Iterable[AnnotationRecord],
    items: Sequence[AnnotationItem],
    *,
    n_annotators: int = 3,
) -> tuple[float, float]:
    """(majority precision, full-agreement precision) for a batch of items.

    Majority counts an item as correctly irrelevant when at least two
    annotators said so; full agreement requires all of them. Every item must
    carry exactly one label from each annotator.
    """
    if not items:
        raise ConfigError("manual_precision requires a nonempty batch")
    by_item: dict[str, dict[str, str]] = {item.item_id: {} for item in items}
    annotators = set()
    for record in records:
        if record.target in by_item:
            by_item[record.target][record.annotator_id] = record.label
            annotators.add(record.annotator_id)
    if len(annotators) > n_annotators:
        raise ConfigError(f"expected {n_annotators} annotators, saw {len(annotators)}")
    if len(annotators) < n_annotators:
        raise IncompleteBatchError([("<missing annotator>", "<entire batch>")])
    missing = [
        (annotator, item.item_id)
        for item in items
        for annotator in sorted(annotators)
        if annotator not in by_item[item.item_id]
    ]
    if missing:
        raise IncompleteBatchError(missing)
    majority = 0
    full = 0
    for item in items:
        votes = sum(1 for label in by_item[item.item_id].values() if label == LABEL_IRRELEVANT)
        if votes >= 2:
            majority += 1
        if votes == n_annotators:
            full += 1
    return majority / len(items), full / len(items)


def manual_precision_by_stratum(
    records: Iterable[AnnotationRecord],
    batch: Sequence[AnnotationItem],
    *,
    n_annotators: int = 3,
) -> dict[str, tuple[float, float]]:
    records = list(records)
    result: dict[str, tuple[float, float]] = {}
    strata = sorted({item.stratum for item in batch}, key=_stratum_order)
    for stratum in strata:
        items = [item for item in batch if item.stratum == stratum]
        result[stratum] = manual_precision(records, items, n_annotators=n_annotators)
    result["total"] = manual_precision(records, batch, n_annotators=n_annotators)
    return result


# ---------------------------------------------------------------------------
# Histograms and reports
# ---------------------------------------------------------------------------

def irrelevance_histograms(
    log: RemovalLog, corpus: Corpus
) -> tuple[dict[int, int], dict[int, tuple[int, int]]]:
    """(texts by detected-sentence count, per-position detected/removed counts)."""
    return texts_by_detection_histogram(log), position_histogram(log, corpus)


def read_annotations(path: str) -> list[AnnotationRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                payload = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", line=ln) from exc
            records.append(
                AnnotationRecord(
                    str(payload["annotator_id"]),
                    str(payload["target"]),
                    str(payload["label"]),
                    float(payload.get("timestamp", 0.0)),
                )
            )
    return records


def write_annotations(records: Iterable[AnnotationRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(annotation_record_json(r) + "\n")


def annotation_record_json(record: AnnotationRecord) -> str:
    return json.dumps(
        {
            "annotator_id": record.annotator_id,
            "target": record.target,
            "label": record.label,
            "timestamp": record.timestamp,
        },
        ensure_ascii=False,
    )


def agreement_summary(records: Sequence[AnnotationRecord], batch: Sequence[AnnotationItem]) -> dict:
    """Fleiss kappa plus pairwise two-annotator kappas over a completed batch."""
    annotators = sorted({r.annotator_id for r in records})
    labels: dict[str, dict[str, str]] = {a: {} for a in annotators}
    for r in records:
        labels[r.annotator_id][r.target] = r.label
    item_ids = [item.item_id for item in batch]
    complete = [a for a in annotators if all(i in labels[a] for i in item_ids)]
    summary: dict = {"annotators": annotators, "complete": complete}
    if len(complete) < 2 or not item_ids:
        summary["fleiss_kappa"] = None
        summary["pairwise_cohen"] = {}
        summary["reason"] = "need at least two annotators with complete batches"
        return summary
    counts = []
    for item_id in item_ids:
        irrelevant = sum(1 for a in complete if labels[a][item_id] == LABEL_IRRELEVANT)
        counts.append([irrelevant, len(complete) - irrelevant])
    try:
        summary["fleiss_kappa"] = fleiss_kappa(counts)
    except KappaUndefined:
        summary["fleiss_kappa"] = None
        summary["reason"] = "kappa undefined: every label in one category"
    pairwise = {}
    for i, a in enumerate(complete):
        for b in complete[i + 1 :]:
            table = contingency_from_labels(
                [labels[a][i_] for i_ in item_ids], [labels[b][i_] for i_ in item_ids]
            )
            try:
                pairwise[f"{a}|{b}"] = cohen_kappa(table)
            except KappaUndefined:
                pairwise[f"{a}|{b}"] = None
    summary["pairwise_cohen"] = pairwise
    return summary


def format_evaluation_report(
    summary: dict, precision: dict[str, tuple[float, float]]
) -> str:
    lines = ["manual evaluation report", "========================", ""]
    fk = summary.get("fleiss_kappa")
    lines.append(f"fleiss_kappa: {fk:.4f}" if fk is not None else "fleiss_kappa: n/a")
    for pair, value in sorted(summary.get("pairwise_cohen", {}).items()):
        lines.append(f"cohen_kappa[{pair}]: " + (f"{value:.4f}" if value is not None else "n/a"))
    lines.append("")
    lines.append("stratum\tmajority_precision\tfull_precision")
    for stratum, (majority, full) in precision.items():
        lines.append(f"{stratum}\t{majority:.4f}\t{full:.4f}")
    return "\n".join(lines) + "\n"


def format_histogram_report(
    texts_hist: dict[int, int], pos_hist: dict[int, tuple[int, int]], log: RemovalLog
) -> str:
    lines = [
        "cleansing report",
        "================",
        "",
        f"detected sentences: {log.detected_sentences} (in {log.detected_texts} texts)",
        f"removed sentences:  {log.removed_sentences} (in {log.affected_texts} texts)",
        f"texts emptied:      {len(log.emptied_texts)}",
        "",
        "texts by number of detected sentences",
        "count\ttexts",
    ]
    for count, n_texts in texts_hist.items():
        lines.append(f"{count}\t{n_texts}")
    lines += ["", "detections by sentence position", "position\tdetected\tremoved"]
    for pos, (detected, removed) in pos_hist.items():
        lines.append(f"{pos}\t{detected}\t{removed}")
    return "\n".join(lines) + "\n"


def histogram_report_json(
    texts_hist: dict[int, int], pos_hist: dict[int, tuple[int, int]], log: RemovalLog
) -> dict:
    return {
        "totals": {
            "detected_sentences": log.detected_sentences,
            "removed_sentences": log.removed_sentences,
            "detected_texts": log.detected_texts,
            "affected_texts": log.affected_texts,
            "emptied_texts": len(log.emptied_texts),
        },
        "texts_by_detected_count": {str(k): v for k, v in texts_hist.items()},
        "positions": {str(k): {"detected": d, "removed": r} for k, (d, r) in pos_hist.items()},
    }
