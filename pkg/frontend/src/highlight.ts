// Snippets arrive with matched terms wrapped in guillemets («term»).
// Translate the markers into <mark> elements; never inject raw HTML.

export interface SnippetPart {
    text: string;
    marked: boolean;
}

export function parseSnippet(snippet: string): SnippetPart[] {
    const parts: SnippetPart[] = [];
    const pattern = /«([^«»]*)»/g;
    let cursor = 0;
    for (const match of snippet.matchAll(pattern)) {
        const index = match.index ?? 0;
        if (index > cursor) {
            parts.push({ text: snippet.slice(cursor, index), marked: false });
        }
        parts.push({ text: match[1], marked: true });
        cursor = index + match[0].length;
    }
    if (cursor < snippet.length) {
        parts.push({ text: snippet.slice(cursor), marked: false });
    }
    return parts;
}

export function renderSnippet(doc: Document, snippet: string): DocumentFragment {
    const fragment = doc.createDocumentFragment();
    for (const part of parseSnippet(snippet)) {
        if (part.marked) {
            const mark = doc.createElement("mark");
            mark.textContent = part.text;
            fragment.appendChild(mark);
        } else {
            fragment.appendChild(doc.createTextNode(part.text));
        }
    }
    return fragment;
}
