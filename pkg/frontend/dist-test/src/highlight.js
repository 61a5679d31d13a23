/** Render a tokenized sample sentence with its match span marked.
 *
 * Spans are computed server-side over the same token stream the matcher
 * uses, so the client never re-tokenizes; it only escapes and wraps.
 */
export function escapeHtml(text) {
    return text
        .replaceAll("&", "&amp;")
        .replaceAll("<", "&lt;")
        .replaceAll(">", "&gt;")
        .replaceAll('"', "&quot;");
}
export function highlightTokens(tokens, span) {
    const [start, end] = span;
    if (end <= start) {
        return tokens.map(escapeHtml).join(" ");
    }
    const parts = [];
    for (let i = 0; i < tokens.length; i++) {
        const escaped = escapeHtml(tokens[i]);
        if (i === start)
            parts.push("<mark>");
        parts.push(escaped);
        if (i === end - 1)
            parts.push("</mark>");
        if (i < tokens.length - 1)
            parts.push(" ");
    }
    return parts.join("");
}
