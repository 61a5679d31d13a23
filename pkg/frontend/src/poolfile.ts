/** Parse and serialize pattern pool files (seeds exports).
 *
 * The serializer is byte-compatible with the pipeline's canonical writer:
 * tab-separated polarity, n, tokens, provenance, tp, fp; rows sorted by
 * polarity, then n, then tokens. serialize(parse(text)) === text holds for
 * any canonically written file, which is what the round-trip check in the
 * triage view relies on.
 */

export interface PoolEntry {
  polarity: "irrelevance" | "relevance";
  tokens: string[];
  provenance: string;
  tp: number;
  fp: number;
}

export function parsePoolFile(text: string): PoolEntry[] {
  const entries: PoolEntry[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i];
    if (!line) continue;
    const parts = line.split("\t");
    if (parts.length !== 6) {
      throw new Error(`line ${i + 1}: expected 6 tab-separated fields, got ${parts.length}`);
    }
    const [polarity, n, tokens, provenance, tp, fp] = parts;
    if (polarity !== "irrelevance" && polarity !== "relevance") {
      throw new Error(`line ${i + 1}: unknown polarity ${polarity}`);
    }
    const tokenList = tokens.split(" ").filter((t) => t.length > 0);
    if (tokenList.length !== Number(n)) {
      throw new Error(`line ${i + 1}: token count does not match n`);
    }
    entries.push({
      polarity,
      tokens: tokenList,
      provenance,
      tp: Number(tp),
      fp: Number(fp),
    });
  }
  return entries;
}

function compareEntries(a: PoolEntry, b: PoolEntry): number {
  if (a.polarity !== b.polarity) return a.polarity < b.polarity ? -1 : 1;
  if (a.tokens.length !== b.tokens.length) return a.tokens.length - b.tokens.length;
  const ta = a.tokens.join(" ");
  const tb = b.tokens.join(" ");
  return ta < tb ? -1 : ta > tb ? 1 : 0;
}

export function serializePoolFile(entries: PoolEntry[]): string {
  const sorted = [...entries].sort(compareEntries);
  return sorted
    .map(
      (e) =>
        `${e.polarity}\t${e.tokens.length}\t${e.tokens.join(" ")}\t${e.provenance}\t${e.tp}\t${e.fp}\n`,
    )
    .join("");
}
