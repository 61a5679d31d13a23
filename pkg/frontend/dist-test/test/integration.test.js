/** Integration against the real pipeline service.
 *
 * Spawns `python3 -m argclean.cli serve`, drives the triage and annotation
 * controllers over real HTTP, and checks the release criteria that belong
 * to the UI: a 100-candidate triage whose seed export round-trips
 * byte-identically, blindness of every annotation payload, and zero loss
 * of acknowledged labels across a hard kill.
 */
import assert from "node:assert/strict";
import { spawn } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { test } from "node:test";
import { ApiClient } from "../src/api.js";
import { AnnotateController } from "../src/annotate.js";
import { TriageController } from "../src/triage.js";
import { parsePoolFile, serializePoolFile } from "../src/poolfile.js";
const CANDIDATE_HEADER = "polarity\ttokens\tn\tscore\tmatch_count";
function writeCandidatesTsv(path, count) {
    const lines = [CANDIDATE_HEADER];
    for (let i = 0; i < count; i++) {
        lines.push(`\tphrase${String(i).padStart(3, "0")} tail${i % 7}\t2\t${count - i}\t${count - i}`);
    }
    writeFileSync(path, lines.join("\n") + "\n");
}
function writeBatchJsonl(path, count) {
    const lines = [];
    for (let i = 0; i < count; i++) {
        lines.push(JSON.stringify({
            item_id: `i${String(i).padStart(4, "0")}`,
            text: `Synthetic sentence number ${i}.`,
            unit_id: `a${i}:1`,
            stratum: i % 2 === 0 ? "seed" : "iter:1",
        }));
    }
    writeFileSync(path, lines.join("\n") + "\n");
}
async function startServer(stateDir, triage, annotate) {
    for (let attempt = 0; attempt < 5; attempt++) {
        const port = 20000 + Math.floor(Math.random() * 20000);
        const proc = spawn("python3", [
            "-m", "argclean.cli", "serve",
            "--state", stateDir,
            "--triage", triage,
            "--annotate", annotate,
            "--port", String(port),
        ], { stdio: ["ignore", "pipe", "pipe"] });
        const ok = await new Promise((resolve) => {
            let settled = false;
            proc.stdout.on("data", (chunk) => {
                if (!settled && chunk.toString().includes("listening")) {
                    settled = true;
                    resolve(true);
                }
            });
            proc.on("exit", () => {
                if (!settled) {
                    settled = true;
                    resolve(false);
                }
            });
            setTimeout(() => {
                if (!settled) {
                    settled = true;
                    resolve(false);
                }
            }, 15000);
        });
        if (ok) {
            return {
                proc,
                base: `http://127.0.0.1:${port}`,
                kill9: () => proc.kill("SIGKILL"),
                stop: () => new Promise((resolve) => {
                    proc.on("exit", () => resolve());
                    proc.kill("SIGINT");
                }),
            };
        }
        proc.kill("SIGKILL");
    }
    throw new Error("could not start the workbench service");
}
test("triage 100 candidates, export seeds, byte-identical round trip", async () => {
    const dir = mkdtempSync(join(tmpdir(), "wb-triage-"));
    const candidates = join(dir, "candidates.tsv");
    const batch = join(dir, "batch.jsonl");
    writeCandidatesTsv(candidates, 100);
    writeBatchJsonl(batch, 4);
    const server = await startServer(join(dir, "state"), candidates, batch);
    try {
        const api = new ApiClient(server.base);
        const controller = new TriageController(api, "triage");
        await controller.load();
        assert.equal(controller.state().total, 100);
        const keys = ["i", "r", "n"];
        for (let i = 0; i < 100; i++) {
            assert.equal(await controller.handleKey(keys[i % 3]), true, `label ${i}`);
        }
        assert.equal(controller.state().done, true);
        assert.equal(controller.state().labeled, 100);
        const first = await controller.exportSeeds();
        const entries = parsePoolFile(first.content);
        // 34 irrelevance + 33 relevance agreed labels; "neither" never exports.
        assert.equal(entries.length, 67);
        assert.equal(serializePoolFile(entries), first.content);
        const second = await controller.exportSeeds();
        assert.equal(second.content, first.content);
    }
    finally {
        await server.stop();
    }
});
test("every annotation payload is blind to provenance", async () => {
    const dir = mkdtempSync(join(tmpdir(), "wb-blind-"));
    const candidates = join(dir, "candidates.tsv");
    const batch = join(dir, "batch.jsonl");
    writeCandidatesTsv(candidates, 3);
    writeBatchJsonl(batch, 10);
    const server = await startServer(join(dir, "state"), candidates, batch);
    const forbidden = new Set(["stratum", "iteration", "provenance", "pattern", "patterns", "unit_id", "arg_id"]);
    const walk = (node) => {
        if (Array.isArray(node)) {
            node.forEach(walk);
        }
        else if (node && typeof node === "object") {
            for (const [key, value] of Object.entries(node)) {
                assert.ok(!forbidden.has(key), `payload leaked field ${key}`);
                walk(value);
            }
        }
    };
    try {
        const api = new ApiClient(server.base);
        const controller = new AnnotateController(api, "annotate", "ann0");
        await controller.load();
        for (let i = 0; i < 10; i++) {
            const raw = await fetch(`${server.base}/api/annotate/next?session=annotate&annotator=ann0`);
            walk(await raw.json());
            assert.equal(await controller.handleKey(i % 2 === 0 ? "i" : "r"), true);
        }
        assert.equal(controller.state().done, true);
        const exported = await api.exportAnnotations("annotate");
        assert.equal(exported.trim().split("\n").length, 10);
    }
    finally {
        await server.stop();
    }
});
test("kill -9 mid-session loses zero acknowledged labels", async () => {
    const dir = mkdtempSync(join(tmpdir(), "wb-kill-"));
    const candidates = join(dir, "candidates.tsv");
    const batch = join(dir, "batch.jsonl");
    writeCandidatesTsv(candidates, 20);
    writeBatchJsonl(batch, 6);
    const stateDir = join(dir, "state");
    let server = await startServer(stateDir, candidates, batch);
    const acknowledged = [];
    try {
        const api = new ApiClient(server.base);
        const triage = new TriageController(api, "triage");
        await triage.load();
        for (let i = 0; i < 7; i++) {
            assert.equal(await triage.handleKey("i"), true);
            acknowledged.push(`c${String(i).padStart(4, "0")}`);
        }
        const annotate = new AnnotateController(api, "annotate", "ann0");
        await annotate.load();
        assert.equal(await annotate.handleKey("i"), true);
        assert.equal(await annotate.handleKey("r"), true);
    }
    finally {
        server.kill9();
    }
    server = await startServer(stateDir, candidates, batch);
    try {
        const api = new ApiClient(server.base);
        const triage = new TriageController(api, "triage");
        await triage.load();
        const view = triage.state();
        assert.equal(view.labeled, 7);
        assert.equal(view.tally.irrelevance, 7);
        assert.equal(view.current?.id, "c0007"); // resumes exactly after the last ack
        const annotate = new AnnotateController(api, "annotate", "ann0");
        await annotate.load();
        assert.equal(annotate.state().index, 2);
        const exported = await api.exportAnnotations("annotate");
        const labels = exported.trim().split("\n").map((line) => JSON.parse(line));
        assert.deepEqual(labels.map((record) => [record.target, record.label]), [["i0000", "irrelevant"], ["i0001", "relevant"]]);
    }
    finally {
        await server.stop();
    }
});
