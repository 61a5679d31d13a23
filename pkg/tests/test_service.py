from __future__ import annotations

import json
import socket
import subprocess
import sys
import threading
import urllib.error
import urllib.request

import pytest

from argclean.bootstrap import load_pool, save_pool
from argclean.evaluation import AnnotationItem, read_annotations
from argclean.patterns import CandidatePattern, PatternType
from argclean.service import GUIDELINES, WorkbenchState, make_server

from conftest import corpus_from_bodies

WO = PatternType("counts", "without_stopwords")


def demo_candidates(n=6):
    rows = []
    specs = [
        ("first round", 617, 610),
        ("thank opponent", 1494, 1490),
        ("vote con", 6048, 6000),
        ("good luck", 335, 330),
        ("first round acceptance", 120, 118),
        ("tax law", 900, 890),
    ]
    for text, score, matches in specs[:n]:
        tokens = tuple(text.split())
        rows.append(("", CandidatePattern(tokens, len(tokens), float(score), matches)))
    return rows


def demo_batch(n=4):
    return [
        AnnotationItem(f"i{k:04d}", f"Sentence number {k}.", ("a", k + 1), "seed" if k % 2 == 0 else "iter:1")
        for k in range(n)
    ]


@pytest.fixture
def server(tmp_path):
    corpus = corpus_from_bodies(
        ["I accept the first round. Vote con today.", "The tax law stands. Good luck."]
    )
    state = WorkbenchState(str(tmp_path / "state"), corpus)
    state.create_triage_session("triage", demo_candidates(), WO)
    state.create_annotation_session("annotate", demo_batch())
    httpd = make_server(state, "127.0.0.1", 0)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{httpd.server_address[1]}"
    yield base, state
    httpd.shutdown()
    httpd.server_close()


def get(base, path):
    with urllib.request.urlopen(base + path) as resp:
        return resp.status, json.loads(resp.read()), dict(resp.headers)


def get_raw(base, path):
    with urllib.request.urlopen(base + path) as resp:
        return resp.status, resp.read().decode("utf-8"), dict(resp.headers)


def post(base, path, payload):
    req = urllib.request.Request(
        base + path,
        data=json.dumps(payload).encode("utf-8"),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read())


class TestTriageEndpoints:
    def test_pagination_no_duplicates(self, server):
        base, _ = server
        seen = []
        for page in (1, 2, 3):
            _, payload, _ = get(base, f"/api/candidates?session=triage&page={page}&page_size=2")
            assert payload["total"] == 6
            seen.extend(item["id"] for item in payload["items"])
        assert len(seen) == len(set(seen)) == 6

    def test_unknown_session_404(self, server):
        base, _ = server
        with pytest.raises(urllib.error.HTTPError) as exc:
            urllib.request.urlopen(base + "/api/candidates?session=nope")
        assert exc.value.code == 404

    def test_samples_carry_match_span(self, server):
        base, _ = server
        _, payload, _ = get(base, "/api/candidates?session=triage&page=1&page_size=10")
        by_text = {item["text"]: item for item in payload["items"]}
        samples = by_text["first round"]["samples"]
        assert samples, "expected a sample sentence for 'first round'"
        sample = samples[0]
        start, end = sample["span"]
        assert sample["tokens"][start:end] == ["first", "round"]
        assert "raw" in sample and "unit_id" in sample

    def test_label_relabel_last_wins(self, server):
        base, _ = server
        status, payload = post(base, "/api/candidates/c0000/label?session=triage", {"label": "relevance"})
        assert status == 200 and payload["tally"]["relevance"] == 1
        status, payload = post(base, "/api/candidates/c0000/label?session=triage", {"label": "irrelevance"})
        assert status == 200
        assert payload["tally"]["irrelevance"] == 1
        assert payload["tally"]["relevance"] == 0

    def test_bad_label_400_unknown_candidate_404(self, server):
        base, _ = server
        status, _ = post(base, "/api/candidates/c0000/label?session=triage", {"label": "spam"})
        assert status == 400
        status, _ = post(base, "/api/candidates/zzz/label?session=triage", {"label": "neither"})
        assert status == 404

    def test_neither_excluded_from_seed_export(self, server, tmp_path):
        base, _ = server
        post(base, "/api/candidates/c0000/label?session=triage", {"label": "irrelevance"})
        post(base, "/api/candidates/c0001/label?session=triage", {"label": "irrelevance"})
        post(base, "/api/candidates/c0002/label?session=triage", {"label": "neither"})
        post(base, "/api/candidates/c0005/label?session=triage", {"label": "relevance"})
        _, content, headers = get_raw(base, "/api/export/seeds?session=triage")
        lines = [line for line in content.splitlines() if line]
        assert len(lines) == 3
        assert not any("vote con" in line for line in lines)
        # export -> import -> export is byte identical
        path = tmp_path / "seeds.tsv"
        path.write_text(content, encoding="utf-8")
        pool = load_pool(str(path), min_freq_irrelevance=1, min_freq_relevance=1)
        again = tmp_path / "seeds2.tsv"
        save_pool(pool, str(again))
        assert again.read_bytes() == path.read_bytes()

    def test_redundant_seeds_flagged_not_dropped(self, server):
        base, _ = server
        post(base, "/api/candidates/c0000/label?session=triage", {"label": "irrelevance"})  # first round
        post(base, "/api/candidates/c0004/label?session=triage", {"label": "irrelevance"})  # first round acceptance
        _, content, headers = get_raw(base, "/api/export/seeds?session=triage")
        assert "first round acceptance" in content  # kept
        assert "first round acceptance" in headers.get("X-Redundant-Patterns", "")

    def test_empty_export_is_schema_valid(self, server, tmp_path):
        base, _ = server
        _, content, _ = get_raw(base, "/api/export/seeds?session=triage")
        assert content == ""
        path = tmp_path / "empty.tsv"
        path.write_text(content, encoding="utf-8")
        pool = load_pool(str(path), min_freq_irrelevance=1, min_freq_relevance=1)
        assert pool.size() == 0

    def test_disagreeing_annotators_do_not_export(self, server):
        base, _ = server
        post(base, "/api/candidates/c0003/label?session=triage", {"label": "irrelevance", "annotator": "a"})
        post(base, "/api/candidates/c0003/label?session=triage", {"label": "relevance", "annotator": "b"})
        _, content, _ = get_raw(base, "/api/export/seeds?session=triage")
        assert "good luck" not in content


class TestAnnotationEndpoints:
    def test_first_item_is_batch_head(self, server):
        base, _ = server
        _, payload, _ = get(base, "/api/annotate/next?session=annotate&annotator=x")
        assert payload["done"] is False
        assert payload["item"]["item_id"] == "i0000"
        assert payload["index"] == 0 and payload["total"] == 4

    def test_payload_blindness(self, server):
        base, _ = server
        forbidden = {"stratum", "iteration", "provenance", "pattern", "patterns", "unit_id", "arg_id"}

        def walk(node):
            if isinstance(node, dict):
                assert not (set(node) & forbidden), f"leaked fields in {node}"
                for value in node.values():
                    walk(value)
            elif isinstance(node, list):
                for value in node:
                    walk(value)

        for k in range(4):
            _, payload, _ = get(base, "/api/annotate/next?session=annotate&annotator=x")
            walk(payload)
            post(
                base,
                "/api/annotate?session=annotate",
                {"item": payload["item"]["item_id"], "label": "irrelevant", "annotator": "x"},
            )

    def test_duplicate_label_409(self, server):
        base, _ = server
        status, _ = post(
            base, "/api/annotate?session=annotate", {"item": "i0000", "label": "relevant", "annotator": "y"}
        )
        assert status == 200
        status, _ = post(
            base, "/api/annotate?session=annotate", {"item": "i0000", "label": "relevant", "annotator": "y"}
        )
        assert status == 409

    def test_done_marker_and_export_round_trip(self, server, tmp_path):
        base, _ = server
        for _ in range(4):
            _, payload, _ = get(base, "/api/annotate/next?session=annotate&annotator=z")
            post(
                base,
                "/api/annotate?session=annotate",
                {"item": payload["item"]["item_id"], "label": "irrelevant", "annotator": "z"},
            )
        _, payload, _ = get(base, "/api/annotate/next?session=annotate&annotator=z")
        assert payload["done"] is True
        _, content, _ = get_raw(base, "/api/export/annotations?session=annotate")
        path = tmp_path / "annotations.jsonl"
        path.write_text(content, encoding="utf-8")
        records = read_annotations(str(path))
        assert len(records) == 4
        assert {r.annotator_id for r in records} == {"z"}
        # import -> export byte identity via the eval writer
        from argclean.evaluation import write_annotations

        again = tmp_path / "annotations2.jsonl"
        write_annotations(records, str(again))
        assert again.read_bytes() == path.read_bytes()

    def test_agreement_gated_until_complete(self, server):
        base, _ = server
        _, payload, _ = get(base, "/api/agreement?session=annotate")
        assert payload["fleiss_kappa"] is None
        assert "reason" in payload
        for annotator in ("p", "q"):
            for k in range(4):
                post(
                    base,
                    "/api/annotate?session=annotate",
                    {"item": f"i{k:04d}", "label": "irrelevant" if k % 2 else "relevant", "annotator": annotator},
                )
        _, payload, _ = get(base, "/api/agreement?session=annotate")
        assert payload["fleiss_kappa"] == 1.0
        assert payload["pairwise_cohen"]["p|q"] == 1.0

    def test_bad_label_and_unknown_item(self, server):
        base, _ = server
        status, _ = post(base, "/api/annotate?session=annotate", {"item": "i0000", "label": "maybe"})
        assert status == 400
        status, _ = post(base, "/api/annotate?session=annotate", {"item": "nope", "label": "relevant"})
        assert status == 404


class TestSessionsAndGuidelines:
    def test_sessions_listing(self, server):
        base, _ = server
        _, payload, _ = get(base, "/api/sessions")
        kinds = {s["session"]: s["kind"] for s in payload["sessions"]}
        assert kinds == {"triage": "triage", "annotate": "annotation"}

    def test_guidelines_served(self, server):
        base, _ = server
        _, payload, _ = get(base, "/api/guidelines")
        assert payload["guidelines"] == GUIDELINES
        assert "IRRELEVANT" in payload["guidelines"]


class TestDurability:
    def test_state_restored_after_process_kill(self, tmp_path):
        """SIGKILL after acknowledged writes; a fresh process sees every label."""
        state_dir = tmp_path / "state"
        port = _free_port()
        script = f"""
import sys
from argclean.patterns import CandidatePattern, PatternType
from argclean.evaluation import AnnotationItem
from argclean.service import WorkbenchState, make_server

state = WorkbenchState({str(state_dir)!r})
state.create_triage_session(
    "triage",
    [("", CandidatePattern(("vote", "con"), 2, 5.0, 5)), ("", CandidatePattern(("good", "luck"), 2, 3.0, 3))],
    PatternType("counts", "without_stopwords"),
)
state.create_annotation_session(
    "annotate", [AnnotationItem("i0000", "Some sentence.", ("a", 1), "seed")]
)
server = make_server(state, "127.0.0.1", {port})
print("READY", flush=True)
server.serve_forever()
"""
        proc = subprocess.Popen(
            [sys.executable, "-c", script], stdout=subprocess.PIPE, stderr=subprocess.PIPE
        )
        try:
            assert proc.stdout.readline().strip() == b"READY"
            base = f"http://127.0.0.1:{port}"
            status, _ = post(base, "/api/candidates/c0000/label?session=triage", {"label": "irrelevance"})
            assert status == 200
            status, _ = post(
                base, "/api/annotate?session=annotate", {"item": "i0000", "label": "relevant", "annotator": "a"}
            )
            assert status == 200
        finally:
            proc.kill()
            proc.wait()

        # Restart on the same state dir: both labels must be there.
        state = WorkbenchState(str(state_dir))
        assert state.triage["triage"].labels["c0000"] == {"default": "irrelevance"}
        assert state.annotation["annotate"].labels["a"] == {"i0000": "relevant"}


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]
