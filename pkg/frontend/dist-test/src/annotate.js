/** Blind annotation flow: fetch next, label, advance on ack.
 *
 * The view model exposes exactly what the wire carries: the sentence text
 * and progress counters. No stratum, pattern, or corpus identifiers exist
 * client-side, so the view cannot leak them.
 */
import { ApiError } from "./api.js";
const KEY_TO_LABEL = {
    r: "relevant",
    i: "irrelevant",
};
export class AnnotateController {
    api;
    session;
    annotator;
    onError;
    itemId = null;
    text = null;
    index = 0;
    total = 0;
    done = false;
    busy = false;
    constructor(api, session, annotator, onError = () => { }) {
        this.api = api;
        this.session = session;
        this.annotator = annotator;
        this.onError = onError;
    }
    async load() {
        const next = await this.api.nextItem(this.session, this.annotator);
        this.total = next.total;
        if (next.done || !next.item) {
            this.done = true;
            this.itemId = null;
            this.text = null;
            this.index = this.total;
            return;
        }
        this.done = false;
        this.itemId = next.item.item_id;
        this.text = next.item.text;
        this.index = next.index ?? 0;
    }
    state() {
        return {
            text: this.text,
            index: this.index,
            total: this.total,
            busy: this.busy,
            done: this.done,
        };
    }
    /** Handle R/I; resolves true when a label was acknowledged. */
    async handleKey(key) {
        if (this.busy || this.done || this.itemId === null)
            return false;
        const label = KEY_TO_LABEL[key.toLowerCase()];
        if (!label)
            return false;
        this.busy = true;
        try {
            await this.api.annotate(this.session, this.itemId, label, this.annotator);
            await this.load();
            return true;
        }
        catch (error) {
            if (error instanceof ApiError && error.status === 409) {
                // Duplicate submit: surface it and resynchronize without advancing blindly.
                this.onError(error.message);
                await this.load();
                return false;
            }
            this.onError(error instanceof Error ? error.message : String(error));
            return false;
        }
        finally {
            this.busy = false;
        }
    }
}
