import assert from "node:assert/strict";
import { test } from "node:test";
import { ApiClient } from "../src/api.js";
import { AnnotateController } from "../src/annotate.js";
import { fakeFetch } from "./fake_service.js";
function setup(n = 3) {
    const state = {
        candidates: [],
        batch: Array.from({ length: n }, (_, i) => ({
            item_id: `i${String(i).padStart(4, "0")}`,
            text: `Sentence ${i}.`,
        })),
        annotations: new Map(),
    };
    const errors = [];
    const api = new ApiClient("http://fake", fakeFetch(state));
    const controller = new AnnotateController(api, "annotate", "ann0", (m) => errors.push(m));
    return { state, controller, errors };
}
test("serves the batch in order and completes", async () => {
    const { state, controller } = setup(3);
    await controller.load();
    assert.equal(controller.state().text, "Sentence 0.");
    assert.equal(controller.state().index, 0);
    assert.equal(await controller.handleKey("r"), true);
    assert.equal(controller.state().text, "Sentence 1.");
    await controller.handleKey("i");
    await controller.handleKey("i");
    assert.equal(controller.state().done, true);
    assert.deepEqual([...state.annotations.get("ann0").values()], ["relevant", "irrelevant", "irrelevant"]);
});
test("zero-item batch is immediately done", async () => {
    const { controller } = setup(0);
    await controller.load();
    assert.equal(controller.state().done, true);
});
test("duplicate submit is surfaced and cursor resynchronizes", async () => {
    const { state, controller, errors } = setup(2);
    await controller.load();
    // Another tab already labeled i0000 for this annotator.
    state.annotations.set("ann0", new Map([["i0000", "relevant"]]));
    assert.equal(await controller.handleKey("i"), false);
    assert.equal(errors.length, 1);
    assert.match(errors[0], /already labeled/);
    assert.equal(controller.state().text, "Sentence 1.");
});
test("keys do nothing after completion", async () => {
    const { controller } = setup(1);
    await controller.load();
    await controller.handleKey("r");
    assert.equal(controller.state().done, true);
    assert.equal(await controller.handleKey("r"), false);
});
test("view state carries only text and progress", async () => {
    const { controller } = setup(1);
    await controller.load();
    assert.deepEqual(Object.keys(controller.state()).sort(), [
        "busy",
        "done",
        "index",
        "text",
        "total",
    ]);
});
