import assert from "node:assert/strict";
import { test } from "node:test";

import { parsePoolFile, serializePoolFile } from "../src/poolfile.js";

const CANONICAL =
  "irrelevance\t2\tfirst round\tseed\t0\t0\n" +
  "irrelevance\t2\tthank opponent\tseed\t0\t0\n" +
  "irrelevance\t3\tdebate good luck\tseed\t0\t0\n" +
  "relevance\t2\ttax law\tseed\t0\t0\n";

test("parse extracts every field", () => {
  const entries = parsePoolFile(CANONICAL);
  assert.equal(entries.length, 4);
  assert.deepEqual(entries[0], {
    polarity: "irrelevance",
    tokens: ["first", "round"],
    provenance: "seed",
    tp: 0,
    fp: 0,
  });
});

test("serialize(parse(x)) is byte-identical on canonical input", () => {
  assert.equal(serializePoolFile(parsePoolFile(CANONICAL)), CANONICAL);
});

test("serialize sorts by polarity, n, tokens", () => {
  const shuffled = parsePoolFile(CANONICAL).reverse();
  assert.equal(serializePoolFile(shuffled), CANONICAL);
});

test("empty file round-trips to empty", () => {
  assert.deepEqual(parsePoolFile(""), []);
  assert.equal(serializePoolFile([]), "");
});

test("token count mismatch is rejected with the line number", () => {
  assert.throws(() => parsePoolFile("irrelevance\t3\tfirst round\tseed\t0\t0\n"), /line 1/);
});

test("unknown polarity is rejected", () => {
  assert.throws(() => parsePoolFile("spam\t1\tx\tseed\t0\t0\n"), /polarity/);
});
