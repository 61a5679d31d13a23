import assert from "node:assert/strict";
import { test } from "node:test";
import { escapeHtml, highlightTokens } from "../src/highlight.js";
test("marks the span and nothing else", () => {
    const html = highlightTokens(["i", "thank", "opponent", "today"], [1, 3]);
    assert.equal(html, "i <mark>thank opponent</mark> today");
});
test("span covering everything", () => {
    assert.equal(highlightTokens(["vote", "con"], [0, 2]), "<mark>vote con</mark>");
});
test("degenerate span renders plainly", () => {
    assert.equal(highlightTokens(["a", "b"], [1, 1]), "a b");
});
test("tokens are escaped", () => {
    const html = highlightTokens(["<script>", "x"], [0, 1]);
    assert.equal(html, "<mark>&lt;script&gt;</mark> x");
});
test("escapeHtml covers the html metacharacters", () => {
    assert.equal(escapeHtml('<a href="x">&'), "&lt;a href=&quot;x&quot;&gt;&amp;");
});
