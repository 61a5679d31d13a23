/** Blind annotation flow: fetch next, label, advance on ack.
 *
 * The view model exposes exactly what the wire carries: the sentence text
 * and progress counters. No stratum, pattern, or corpus identifiers exist
 * client-side, so the view cannot leak them.
 */

import { ApiClient, ApiError } from "./api.js";

const KEY_TO_LABEL: Record<string, string> = {
  r: "relevant",
  i: "irrelevant",
};

export interface AnnotateViewState {
  text: string | null;
  index: number;
  total: number;
  busy: boolean;
  done: boolean;
}

export class AnnotateController {
  private itemId: string | null = null;
  private text: string | null = null;
  private index = 0;
  private total = 0;
  private done = false;
  private busy = false;

  constructor(
    private api: ApiClient,
    private session: string,
    private annotator: string,
    private onError: (message: string) => void = () => {},
  ) {}

  async load(): Promise<void> {
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

  state(): AnnotateViewState {
    return {
      text: this.text,
      index: this.index,
      total: this.total,
      busy: this.busy,
      done: this.done,
    };
  }

  /** Handle R/I; resolves true when a label was acknowledged. */
  async handleKey(key: string): Promise<boolean> {
    if (this.busy || this.done || this.itemId === null) return false;
    const label = KEY_TO_LABEL[key.toLowerCase()];
    if (!label) return false;
    this.busy = true;
    try {
      await this.api.annotate(this.session, this.itemId, label, this.annotator);
      await this.load();
      return true;
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        // Duplicate submit: surface it and resynchronize without advancing blindly.
        this.onError(error.message);
        await this.load();
        return false;
      }
      this.onError(error instanceof Error ? error.message : String(error));
      return false;
    } finally {
      this.busy = false;
    }
  }
}
