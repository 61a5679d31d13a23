"""Workbench HTTP service for seed triage and blind sentence annotation.

Endpoints (JSON over HTTP, same-origin only):

    GET  /api/sessions                         list sessions and progress
    GET  /api/guidelines                       annotation guidelines text
    GET  /api/candidates?session=S&page=P      paged triage candidates
    POST /api/candidates/<id>/label?session=S  {"label": ..., "annotator": ...}
    GET  /api/annotate/next?session=S&annotator=A
    POST /api/annotate?session=S               {"item": ..., "label": ..., "annotator": ...}
    GET  /api/agreement?session=S              Fleiss + pairwise kappas when complete
    GET  /api/export/seeds?session=S           pool file (text/plain)
    GET  /api/export/annotations?session=S     annotation JSONL

Every acknowledged label is appended to the session journal and fsynced
before the response is sent, so a crash after a 200 never loses a label.
Annotation payloads never carry stratum or provenance fields; annotators
stay blind to the iteration a sentence came from.
"""

from __future__ import annotations

import json
import os
import re
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .bootstrap import PatternPool, pool_to_lines
from .corpus import Corpus
from .errors import ConfigError
from .evaluation import (
    AnnotationItem,
    AnnotationRecord,
    agreement_summary,
    annotation_record_json,
)
from .patterns import (
    CandidatePattern,
    Pattern,
    PatternType,
    redundancy_filter,
    tokens_for_mode,
)

TRIAGE_LABELS = ("relevance", "irrelevance", "neither")
ANNOTATION_LABELS = ("relevant", "irrelevant")

GUIDELINES = """\
Label a sentence IRRELEVANT only if it contributes no claim, no evidence,
no fact, and no background information about the issue the author is
discussing. Typical irrelevant sentences are greetings and salutations,
thanks and other courtesies, remarks about the debate itself or its rules
(acceptance rounds, forfeits, calls to vote), personal insults, purely
rhetorical filler, and spam. If a sentence gives context that a reader
needs to follow the argument, it is RELEVANT, even if it is not itself an
argument. When in doubt, label the sentence RELEVANT.
"""


@dataclass
class TriageSession:
    session_id: str
    ptype: PatternType
    candidates: list[tuple[str, CandidatePattern]]  # (candidate_id, candidate)
    labels: dict[str, dict[str, str]] = field(default_factory=dict)  # id -> annotator -> label

    def tally(self) -> dict[str, int]:
        counts = {label: 0 for label in TRIAGE_LABELS}
        for per_annotator in self.labels.values():
            label = self._agreed(per_annotator)
            if label:
                counts[label] += 1
        counts["unlabeled"] = len(self.candidates) - sum(
            1 for v in self.labels.values() if self._agreed(v)
        )
        return counts

    @staticmethod
    def _agreed(per_annotator: dict[str, str]) -> str | None:
        values = set(per_annotator.values())
        if len(values) == 1:
            return next(iter(values))
        return None

    def seed_patterns(self) -> list[Pattern]:
        seeds = []
        for candidate_id, candidate in self.candidates:
            label = self._agreed(self.labels.get(candidate_id, {}))
            if label in ("relevance", "irrelevance"):
                seeds.append(Pattern(candidate.tokens, label, "seed", self.ptype))
        return seeds


@dataclass
class AnnotationSession:
    session_id: str
    batch: list[AnnotationItem]
    labels: dict[str, dict[str, str]] = field(default_factory=dict)  # annotator -> item -> label
    _timestamps: dict[tuple[str, str], float] = field(default_factory=dict, repr=False)

    def next_for(self, annotator: str) -> tuple[int, AnnotationItem] | None:
        done = self.labels.get(annotator, {})
        for idx, item in enumerate(self.batch):
            if item.item_id not in done:
                return idx, item
        return None

    def records(self) -> list[AnnotationRecord]:
        out = []
        for annotator in sorted(self.labels):
            for item in self.batch:
                label = self.labels[annotator].get(item.item_id)
                if label is not None:
                    ts = self._timestamps.get((annotator, item.item_id), 0.0)
                    out.append(AnnotationRecord(annotator, item.item_id, label, ts))
        return out


class WorkbenchState:
    """All sessions plus the journaling that makes labels durable."""

    def __init__(self, state_dir: str, corpus: Corpus | None = None):
        self.state_dir = state_dir
        self.corpus = corpus
        self.triage: dict[str, TriageSession] = {}
        self.annotation: dict[str, AnnotationSession] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._sample_cache: dict[tuple[str, str], list[dict]] = {}
        os.makedirs(state_dir, exist_ok=True)
        self._restore()

    # -- session lifecycle ---------------------------------------------------

    def _meta_path(self, session_id: str) -> str:
        return os.path.join(self.state_dir, f"{session_id}.meta.json")

    def _journal_path(self, session_id: str) -> str:
        return os.path.join(self.state_dir, f"{session_id}.journal.jsonl")

    def _lock(self, session_id: str) -> threading.Lock:
        return self._locks.setdefault(session_id, threading.Lock())

    def create_triage_session(
        self,
        session_id: str,
        candidates: list[tuple[str, CandidatePattern]],
        ptype: PatternType,
    ) -> TriageSession:
        if session_id in self.triage or session_id in self.annotation:
            return self.triage[session_id]
        rows = [(f"c{i:04d}", cand) for i, (_, cand) in enumerate(candidates)]
        session = TriageSession(session_id, ptype, rows)
        # Pre-apply polarity labels carried in the candidate table.
        for (polarity, _), (candidate_id, _) in zip(candidates, rows):
            if polarity in ("relevance", "irrelevance"):
                session.labels.setdefault(candidate_id, {})["import"] = polarity
        meta = {
            "kind": "triage",
            "ptype": ptype.key,
            "candidates": [
                {
                    "id": candidate_id,
                    "tokens": list(cand.tokens),
                    "n": cand.n,
                    "score": cand.score,
                    "match_count": cand.match_count,
                }
                for candidate_id, cand in rows
            ],
            "imported_labels": {
                candidate_id: dict(labels) for candidate_id, labels in session.labels.items()
            },
        }
        self._write_meta(session_id, meta)
        self.triage[session_id] = session
        return session

    def create_annotation_session(self, session_id: str, batch: list[AnnotationItem]) -> AnnotationSession:
        if session_id in self.annotation:
            return self.annotation[session_id]
        session = AnnotationSession(session_id, list(batch))
        meta = {
            "kind": "annotation",
            "batch": [
                {
                    "item_id": item.item_id,
                    "text": item.text,
                    "unit_id": f"{item.unit_id[0]}:{item.unit_id[1]}",
                    "stratum": item.stratum,
                }
                for item in batch
            ],
        }
        self._write_meta(session_id, meta)
        self.annotation[session_id] = session
        return session

    def _write_meta(self, session_id: str, meta: dict) -> None:
        path = self._meta_path(session_id)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(meta, fh, ensure_ascii=False)
            fh.flush()
            os.fsync(fh.fileno())

    def _restore(self) -> None:
        for name in sorted(os.listdir(self.state_dir)):
            if not name.endswith(".meta.json"):
                continue
            session_id = name[: -len(".meta.json")]
            with open(os.path.join(self.state_dir, name), encoding="utf-8") as fh:
                meta = json.load(fh)
            if meta["kind"] == "triage":
                rows = [
                    (
                        c["id"],
                        CandidatePattern(tuple(c["tokens"]), c["n"], c["score"], c["match_count"]),
                    )
                    for c in meta["candidates"]
                ]
                session = TriageSession(session_id, PatternType.parse(meta["ptype"]), rows)
                for candidate_id, labels in meta.get("imported_labels", {}).items():
                    session.labels[candidate_id] = dict(labels)
                self.triage[session_id] = session
            else:
                batch = []
                for item in meta["batch"]:
                    arg_id, _, position = item["unit_id"].rpartition(":")
                    batch.append(
                        AnnotationItem(item["item_id"], item["text"], (arg_id, int(position)), item["stratum"])
                    )
                self.annotation[session_id] = AnnotationSession(session_id, batch)
            self._replay_journal(session_id)

    def _replay_journal(self, session_id: str) -> None:
        path = self._journal_path(session_id)
        if not os.path.exists(path):
            return
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                entry = json.loads(line)
                self._apply(session_id, entry)

    def _apply(self, session_id: str, entry: dict) -> None:
        if entry["kind"] == "triage":
            session = self.triage[session_id]
            session.labels.setdefault(entry["target"], {})[entry["annotator"]] = entry["label"]
        else:
            session = self.annotation[session_id]
            session.labels.setdefault(entry["annotator"], {})[entry["target"]] = entry["label"]
            session._timestamps[(entry["annotator"], entry["target"])] = entry["ts"]

    def journal_label(self, session_id: str, kind: str, annotator: str, target: str, label: str) -> dict:
        """Append one label record; durable before returning."""
        entry = {
            "kind": kind,
            "annotator": annotator,
            "target": target,
            "label": label,
            "ts": time.time(),
        }
        with self._lock(session_id):
            with open(self._journal_path(session_id), "a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, ensure_ascii=False) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            self._apply(session_id, entry)
        return entry

    # -- derived views ---------------------------------------------------------

    def candidate_samples(self, session: TriageSession, candidate: CandidatePattern, limit: int = 3) -> list[dict]:
        """First few corpus sentences containing the candidate, with the match span."""
        cache_key = (session.session_id, " ".join(candidate.tokens))
        if cache_key in self._sample_cache:
            return self._sample_cache[cache_key]
        samples: list[dict] = []
        if self.corpus is not None:
            for unit in self.corpus.units():
                tokens = tokens_for_mode(unit, session.ptype.stopword_mode)
                span = _find_span(tokens, candidate.tokens)
                if span is not None:
                    samples.append(
                        {
                            "unit_id": f"{unit.arg_id}:{unit.position}",
                            "raw": unit.raw,
                            "tokens": list(tokens),
                            "span": [span, span + candidate.n],
                        }
                    )
                    if len(samples) >= limit:
                        break
        self._sample_cache[cache_key] = samples
        return samples

    def export_seeds(self, session: TriageSession) -> tuple[str, list[str]]:
        """Canonical pool file plus warnings for redundant selections (kept, not dropped)."""
        seeds = session.seed_patterns()
        pool = PatternPool(
            ptype=session.ptype, min_freq_irrelevance=1, min_freq_relevance=1
        )
        for pattern in seeds:
            pool.add(pattern)
        warnings = []
        for polarity in ("irrelevance", "relevance"):
            chosen = [p for p in seeds if p.polarity == polarity]
            surviving = redundancy_filter(chosen) if chosen else set()
            for pattern in chosen:
                if pattern not in surviving:
                    warnings.append(pattern.text)
        content = "".join(line + "\n" for line in pool_to_lines(pool))
        return content, sorted(warnings)

    def export_annotations(self, session: AnnotationSession) -> str:
        return "".join(annotation_record_json(r) + "\n" for r in session.records())


def _find_span(tokens, needle) -> int | None:
    k = len(needle)
    for i in range(len(tokens) - k + 1):
        if tuple(tokens[i : i + k]) == tuple(needle):
            return i
    return None


class _Handler(BaseHTTPRequestHandler):
    state: WorkbenchState
    static_dir: str | None = None
    protocol_version = "HTTP/1.1"

    # -- plumbing -------------------------------------------------------------

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass

    def _json(self, status: int, payload: dict, headers: dict | None = None) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        for key, value in (headers or {}).items():
            self.send_header(key, value)
        self.end_headers()
        self.wfile.write(body)

    def _text(self, status: int, content: str, content_type: str, headers: dict | None = None) -> None:
        body = content.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        for key, value in (headers or {}).items():
            self.send_header(key, value)
        self.end_headers()
        self.wfile.write(body)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        try:
            return json.loads(self.rfile.read(length).decode("utf-8"))
        except json.JSONDecodeError:
            return {}

    def _query(self) -> dict[str, str]:
        return {k: v[0] for k, v in parse_qs(urlparse(self.path).query).items()}

    # -- routes -----------------------------------------------------------------

    def do_GET(self):
        path = urlparse(self.path).path
        query = self._query()
        if path == "/api/sessions":
            return self._sessions()
        if path == "/api/guidelines":
            return self._json(200, {"guidelines": GUIDELINES})
        if path == "/api/candidates":
            return self._candidates(query)
        if path == "/api/annotate/next":
            return self._annotate_next(query)
        if path == "/api/agreement":
            return self._agreement(query)
        if path == "/api/export/seeds":
            return self._export_seeds(query)
        if path == "/api/export/annotations":
            return self._export_annotations(query)
        if path.startswith("/api/"):
            return self._json(404, {"error": f"unknown endpoint {path}"})
        return self._static(path)

    def do_POST(self):
        path = urlparse(self.path).path
        query = self._query()
        match = re.fullmatch(r"/api/candidates/([^/]+)/label", path)
        if match:
            return self._label_candidate(match.group(1), query)
        if path == "/api/annotate":
            return self._annotate(query)
        return self._json(404, {"error": f"unknown endpoint {path}"})

    # -- triage -----------------------------------------------------------------

    def _triage_session(self, query) -> TriageSession | None:
        session = self.state.triage.get(query.get("session", ""))
        if session is None:
            self._json(404, {"error": "unknown session"})
        return session

    def _candidates(self, query):
        session = self._triage_session(query)
        if session is None:
            return
        page = max(1, int(query.get("page", "1")))
        page_size = max(1, int(query.get("page_size", "50")))
        start = (page - 1) * page_size
        rows = session.candidates[start : start + page_size]
        items = []
        for candidate_id, candidate in rows:
            per_annotator = session.labels.get(candidate_id, {})
            items.append(
                {
                    "id": candidate_id,
                    "tokens": list(candidate.tokens),
                    "text": candidate.text,
                    "n": candidate.n,
                    "score": candidate.score,
                    "match_count": candidate.match_count,
                    "label": TriageSession._agreed(per_annotator),
                    "labels": dict(per_annotator),
                    "samples": self.state.candidate_samples(session, candidate),
                }
            )
        self._json(
            200,
            {
                "session": session.session_id,
                "page": page,
                "page_size": page_size,
                "total": len(session.candidates),
                "items": items,
                "tally": session.tally(),
            },
        )

    def _label_candidate(self, candidate_id: str, query):
        session = self._triage_session(query)
        if session is None:
            return
        body = self._read_body()
        label = body.get("label")
        if label not in TRIAGE_LABELS:
            return self._json(400, {"error": f"label must be one of {list(TRIAGE_LABELS)}"})
        if not any(candidate_id == cid for cid, _ in session.candidates):
            return self._json(404, {"error": f"unknown candidate {candidate_id}"})
        annotator = str(body.get("annotator", "default"))
        self.state.journal_label(session.session_id, "triage", annotator, candidate_id, label)
        self._json(200, {"id": candidate_id, "label": label, "tally": session.tally()})

    def _export_seeds(self, query):
        session = self._triage_session(query)
        if session is None:
            return
        content, warnings = self.state.export_seeds(session)
        headers = {"Content-Disposition": 'attachment; filename="seeds.tsv"'}
        if warnings:
            headers["X-Redundant-Patterns"] = "; ".join(warnings)
        self._text(200, content, "text/plain; charset=utf-8", headers)

    # -- annotation ---------------------------------------------------------------

    def _annotation_session(self, query) -> AnnotationSession | None:
        session = self.state.annotation.get(query.get("session", ""))
        if session is None:
            self._json(404, {"error": "unknown session"})
        return session

    def _annotate_next(self, query):
        session = self._annotation_session(query)
        if session is None:
            return
        annotator = query.get("annotator", "default")
        nxt = session.next_for(annotator)
        if nxt is None:
            return self._json(200, {"done": True, "total": len(session.batch)})
        index, item = nxt
        # Blindness: only the text and progress go over the wire.
        self._json(
            200,
            {
                "done": False,
                "item": {"item_id": item.item_id, "text": item.text},
                "index": index,
                "total": len(session.batch),
            },
        )

    def _annotate(self, query):
        session = self._annotation_session(query)
        if session is None:
            return
        body = self._read_body()
        label = body.get("label")
        item_id = body.get("item")
        annotator = str(body.get("annotator", "default"))
        if label not in ANNOTATION_LABELS:
            return self._json(400, {"error": f"label must be one of {list(ANNOTATION_LABELS)}"})
        if not any(item.item_id == item_id for item in session.batch):
            return self._json(404, {"error": f"unknown item {item_id}"})
        if item_id in session.labels.get(annotator, {}):
            return self._json(409, {"error": f"{annotator} already labeled {item_id}"})
        self.state.journal_label(session.session_id, "annotation", annotator, item_id, label)
        remaining = sum(
            1 for item in session.batch if item.item_id not in session.labels.get(annotator, {})
        )
        self._json(200, {"item": item_id, "label": label, "remaining": remaining})

    def _export_annotations(self, query):
        session = self._annotation_session(query)
        if session is None:
            return
        self._text(
            200,
            self.state.export_annotations(session),
            "application/x-ndjson; charset=utf-8",
            {"Content-Disposition": 'attachment; filename="annotations.jsonl"'},
        )

    def _agreement(self, query):
        session = self._annotation_session(query)
        if session is None:
            return
        summary = agreement_summary(session.records(), session.batch)
        self._json(200, summary)

    # -- misc -------------------------------------------------------------------

    def _sessions(self):
        sessions = []
        for session in self.state.triage.values():
            sessions.append(
                {
                    "session": session.session_id,
                    "kind": "triage",
                    "total": len(session.candidates),
                    "tally": session.tally(),
                }
            )
        for session in self.state.annotation.values():
            progress = {
                annotator: len(labels) for annotator, labels in sorted(session.labels.items())
            }
            sessions.append(
                {
                    "session": session.session_id,
                    "kind": "annotation",
                    "total": len(session.batch),
                    "progress": progress,
                }
            )
        self._json(200, {"sessions": sessions})

    def _static(self, path: str):
        if self.static_dir is None:
            return self._text(
                200,
                "<!doctype html><title>argclean workbench</title>"
                "<p>No UI assets configured. Use the JSON API under /api/ or "
                "point --static at a built frontend.</p>",
                "text/html; charset=utf-8",
            )
        name = path.lstrip("/") or "index.html"
        full = os.path.realpath(os.path.join(self.static_dir, name))
        if not full.startswith(os.path.realpath(self.static_dir) + os.sep) and full != os.path.realpath(
            os.path.join(self.static_dir, "index.html")
        ):
            return self._json(404, {"error": "not found"})
        if not os.path.isfile(full):
            return self._json(404, {"error": "not found"})
        content_type = {
            ".html": "text/html; charset=utf-8",
            ".js": "text/javascript; charset=utf-8",
            ".css": "text/css; charset=utf-8",
            ".json": "application/json",
        }.get(os.path.splitext(full)[1], "application/octet-stream")
        with open(full, "rb") as fh:
            body = fh.read()
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(
    state: WorkbenchState,
    host: str = "127.0.0.1",
    port: int = 8765,
    static_dir: str | None = None,
) -> ThreadingHTTPServer:
    handler = type("Handler", (_Handler,), {"state": state, "static_dir": static_dir})
    try:
        return ThreadingHTTPServer((host, port), handler)
    except OSError as exc:
        raise ConfigError(f"cannot bind {host}:{port}: {exc}")
