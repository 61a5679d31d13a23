"""Corpus ingestion: argument texts, sentence units, token normalization, sampling.

A corpus is a list of argument texts; each text is segmented into sentence
units, and each unit carries two normalized token sequences (with and
without stopwords). Everything here is pure and deterministic so corpora can
be rebuilt bit-identically from the same inputs.
"""

from __future__ import annotations

import json
import math
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import ConfigError, ParseError
from .stopwords import StopwordList, default_stopwords

UnitId = tuple[str, int]
SentenceKey = tuple[str, ...]

# Letters and digits form tokens; every other character is a boundary, so
# possessive clitics split ("opponent's" -> "opponent", "s") and digits
# survive as tokens ("round 1" -> "round", "1").
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Lowercased abbreviation stems (no trailing dot) that do not end a sentence.
ABBREVIATIONS = frozenset(
    """
    mr mrs ms dr prof rev gen sen rep sgt col capt lt
    st mt ft jr sr vs etc al inc ltd co corp dept univ
    approx est min max fig sec chap vol pp
    e.g i.e eg ie cf
    a.m p.m u.s u.k u.n
    """.split()
)


@dataclass(frozen=True)
class Unit:
    """One sentence of one argument text."""

    arg_id: str
    position: int  # 1-based within the text
    raw: str
    tokens_full: tuple[str, ...]
    tokens_content: tuple[str, ...]

    def __post_init__(self):
        if self.position < 1:
            raise ValueError(f"unit position must be >= 1, got {self.position}")

    @property
    def unit_id(self) -> UnitId:
        return (self.arg_id, self.position)

    @property
    def sentence_key(self) -> SentenceKey:
        """Identity used to count 'different sentences': the full token sequence."""
        return self.tokens_full


@dataclass
class ArgumentText:
    arg_id: str
    conclusion: str
    body: str
    source: str
    units: list[Unit] = field(default_factory=list)


@dataclass
class Corpus:
    texts: list[ArgumentText]
    provenance: str = ""
    _by_id: dict[str, ArgumentText] | None = field(default=None, repr=False, compare=False)
    _sentences: dict[SentenceKey, list[Unit]] | None = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.texts)

    def text_by_id(self, arg_id: str) -> ArgumentText:
        if self._by_id is None:
            self._by_id = {t.arg_id: t for t in self.texts}
        return self._by_id[arg_id]

    def units(self) -> Iterator[Unit]:
        for text in self.texts:
            yield from text.units

    def unit_by_id(self, unit_id: UnitId) -> Unit:
        arg_id, position = unit_id
        return self.text_by_id(arg_id).units[position - 1]

    def sentence_occurrences(self) -> dict[SentenceKey, list[Unit]]:
        """Distinct sentences (by full token sequence) -> all occurrences, in corpus order."""
        if self._sentences is None:
            table: dict[SentenceKey, list[Unit]] = {}
            for unit in self.units():
                table.setdefault(unit.sentence_key, []).append(unit)
            self._sentences = table
        return self._sentences


def normalize_tokens(raw: str, stopwords: StopwordList) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Lowercase and tokenize; return (all tokens, tokens minus stopwords)."""
    full = tuple(m.group(0) for m in _TOKEN_RE.finditer(raw.lower()))
    content = tuple(t for t in full if t not in stopwords)
    return full, content


_CLOSERS = "\"')]’”"


def _abbreviation_before(body: str, dot: int) -> bool:
    # Collect the word (letters/dots) immediately before the final dot.
    j = dot
    while j > 0 and (body[j - 1].isalpha() or body[j - 1] == "."):
        j -= 1
    word = body[j:dot].lower().rstrip(".")
    if not word:
        return False
    if len(word) == 1 and word.isalpha():
        return True  # initials such as "J. Smith"
    return word in ABBREVIATIONS


def _is_boundary(body: str, punct_start: int, run_end: int, after_closers: int) -> bool:
    if after_closers >= len(body):
        return True
    if not body[after_closers].isspace():
        return False  # e.g. the decimal point in "$5.50"
    k = after_closers
    while k < len(body) and body[k].isspace():
        k += 1
    if k >= len(body):
        return True
    if not body[k].isupper():
        return False
    if body[punct_start] == "." and run_end - punct_start == 1 and _abbreviation_before(body, punct_start):
        return False
    return True


def segment_units(body: str) -> list[str]:
    """Split a text into raw sentence strings.

    Deterministic rule-based splitting: a run of sentence-final punctuation
    (. ! ?) ends a sentence when followed by whitespace and a capital letter,
    or by the end of the text, unless the preceding word is a known
    abbreviation or a single-letter initial. Never returns empty strings.
    """
    sentences: list[str] = []
    start = 0
    i = 0
    n = len(body)
    while i < n:
        if body[i] in ".!?":
            j = i + 1
            while j < n and body[j] in ".!?":
                j += 1
            k = j
            while k < n and body[k] in _CLOSERS:
                k += 1
            if _is_boundary(body, i, j, k):
                piece = body[start:k].strip()
                if piece:
                    sentences.append(piece)
                start = k
                i = k
                continue
            i = j
        else:
            i += 1
    tail = body[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def build_argument_text(
    arg_id: str,
    body: str,
    *,
    conclusion: str = "",
    source: str = "",
    stopwords: StopwordList | None = None,
    include_conclusion: bool = False,
) -> ArgumentText:
    """Segment and normalize one argument into its units.

    With include_conclusion the conclusion is treated as leading text, so its
    sentences become units subject to matching and cleansing.
    """
    stopwords = stopwords or default_stopwords()
    effective = body
    if include_conclusion and conclusion.strip():
        effective = conclusion.strip() + " " + body if body else conclusion.strip()
    units = []
    for pos, raw in enumerate(segment_units(effective), start=1):
        full, content = normalize_tokens(raw, stopwords)
        units.append(Unit(arg_id, pos, raw, full, content))
    return ArgumentText(arg_id, conclusion, effective if include_conclusion else body, source, units)


DEFAULT_ARGSME_MAPPING = {
    "id": "id",
    "conclusion": "conclusion",
    "premises": "premises[].text",
    "source": "context.sourceId",
}


def _resolve_path(record: dict, path: str):
    """Resolve a dotted field path; 'xs[].y' maps over a list field."""
    if "[]" in path:
        head, _, tail = path.partition("[]")
        head = head.rstrip(".")
        tail = tail.lstrip(".")
        items = _resolve_path(record, head) if head else record
        if items is None:
            return []
        if not isinstance(items, list):
            raise KeyError(head)
        return [_resolve_path(item, tail) if tail else item for item in items]
    node = record
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            raise KeyError(part)
        node = node[part]
    return node


def _load_generic_jsonl(path: str, stopwords: StopwordList, include_conclusion: bool) -> list[ArgumentText]:
    texts = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", line=ln) from exc
            if not isinstance(record, dict):
                raise ParseError("expected a JSON object", line=ln)
            if "id" not in record or "text" not in record:
                raise ParseError('missing required key "id" or "text"', line=ln)
            arg_id = str(record["id"])
            if arg_id in seen:
                raise ParseError(f"duplicate arg_id {arg_id!r}", line=ln)
            seen.add(arg_id)
            texts.append(
                build_argument_text(
                    arg_id,
                    str(record["text"]),
                    stopwords=stopwords,
                    include_conclusion=include_conclusion,
                )
            )
    return texts


def _load_argsme_json(
    path: str,
    stopwords: StopwordList,
    mapping: dict[str, str],
    include_conclusion: bool,
) -> list[ArgumentText]:
    with open(path, encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})", line=exc.lineno) from exc
    if isinstance(payload, dict):
        records = payload.get("arguments")
        if records is None:
            raise ParseError('top-level object lacks an "arguments" array', record=0)
    else:
        records = payload
    if not isinstance(records, list):
        raise ParseError("expected an array of argument records", record=0)

    texts = []
    seen = set()
    for idx, record in enumerate(records):
        if not isinstance(record, dict):
            raise ParseError("argument record is not an object", record=idx)
        try:
            arg_id = str(_resolve_path(record, mapping["id"]))
        except KeyError as exc:
            raise ParseError(f"missing id field {mapping['id']!r}", record=idx) from exc
        if arg_id in seen:
            raise ParseError(f"duplicate arg_id {arg_id!r}", record=idx)
        seen.add(arg_id)
        try:
            premises = _resolve_path(record, mapping["premises"])
        except KeyError as exc:
            raise ParseError(f"missing premises field {mapping['premises']!r}", record=idx) from exc
        if isinstance(premises, str):
            premises = [premises]
        body = "\n".join(str(p) for p in premises if p)
        try:
            conclusion = str(_resolve_path(record, mapping["conclusion"]))
        except KeyError:
            conclusion = ""
        try:
            source = str(_resolve_path(record, mapping["source"]))
        except KeyError:
            source = ""
        texts.append(
            build_argument_text(
                arg_id,
                body,
                conclusion=conclusion,
                source=source,
                stopwords=stopwords,
                include_conclusion=include_conclusion,
            )
        )
    return texts


def load_corpus(
    path: str,
    format: str,
    *,
    stopwords: StopwordList | None = None,
    field_mapping: dict[str, str] | None = None,
    include_conclusions: bool = False,
) -> Corpus:
    """Load a corpus file into segmented, normalized argument texts.

    Supported formats: "generic_jsonl" (one {"id", "text"} object per line)
    and "argsme_json" (array or {"arguments": [...]} with a field mapping).
    """
    stopwords = stopwords or default_stopwords()
    if format == "generic_jsonl":
        texts = _load_generic_jsonl(path, stopwords, include_conclusions)
    elif format == "argsme_json":
        mapping = dict(DEFAULT_ARGSME_MAPPING)
        mapping.update(field_mapping or {})
        texts = _load_argsme_json(path, stopwords, mapping, include_conclusions)
    else:
        raise ConfigError(f"unknown corpus format: {format!r}")
    return Corpus(texts, provenance=f"{format}:{path}")


def sample_corpus(corpus: Corpus, fraction: float, rng_seed: int) -> Corpus:
    """Draw ceil(fraction * len) texts uniformly without replacement, reproducibly."""
    if not corpus.texts:
        raise ConfigError("cannot sample an empty corpus")
    if not 0.0 < fraction <= 1.0:
        raise ConfigError(f"sample fraction must be in (0, 1], got {fraction}")
    k = math.ceil(fraction * len(corpus.texts))
    rng = random.Random(rng_seed)
    chosen = sorted(rng.sample(range(len(corpus.texts)), k))
    return Corpus(
        [corpus.texts[i] for i in chosen],
        provenance=f"{corpus.provenance} (sample fraction={fraction} seed={rng_seed})",
    )


def corpus_from_records(records: Iterable[tuple[str, str]], *, stopwords: StopwordList | None = None, provenance: str = "memory") -> Corpus:
    """Build a corpus from (arg_id, body) pairs; convenience for tests and generators."""
    stopwords = stopwords or default_stopwords()
    texts = [build_argument_text(arg_id, body, stopwords=stopwords) for arg_id, body in records]
    return Corpus(texts, provenance=provenance)
