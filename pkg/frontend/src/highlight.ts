// Sentence rendering: one lane per tuple, predicate and argument spans marked
// over the unmodified text. Overlaps layer by accumulating roles on a
// segment; the text itself is never mutated or reordered.

import type { TupleObj } from "./api.js";

export interface HighlightSpan {
  start: number;
  end: number;
  role: "predicate" | "argument";
}

export interface Segment {
  text: string;
  roles: string[];
}

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Cut the text at every span boundary and tag each piece with the roles of
 * the spans covering it. Concatenating the pieces restores the text. */
export function segmentText(text: string, spans: HighlightSpan[]): Segment[] {
  const cuts = new Set([0, text.length]);
  for (const span of spans) {
    cuts.add(Math.max(0, Math.min(span.start, text.length)));
    cuts.add(Math.max(0, Math.min(span.end, text.length)));
  }
  const points = [...cuts].sort((a, b) => a - b);
  const segments: Segment[] = [];
  for (let i = 0; i + 1 < points.length; i++) {
    const [a, b] = [points[i], points[i + 1]];
    if (a === b) continue;
    const roles = spans
      .filter((s) => s.start <= a && b <= s.end)
      .map((s) => s.role);
    segments.push({ text: text.slice(a, b), roles: [...new Set(roles)].sort() });
  }
  return segments;
}

export function tupleSpans(tuple: TupleObj): HighlightSpan[] {
  const spans: HighlightSpan[] = [];
  if (!tuple.predicate.synthetic) {
    spans.push({ start: tuple.predicate.start, end: tuple.predicate.end, role: "predicate" });
  }
  for (const arg of tuple.args) {
    spans.push({ start: arg.start, end: arg.end, role: "argument" });
  }
  return spans;
}

/** One lane of highlighted text for a tuple. Synthetic predicates have no
 * anchor in the text and render as a chip before the sentence. */
export function renderTupleHtml(text: string, tuple: TupleObj): string {
  const segments = segmentText(text, tupleSpans(tuple));
  const body = segments
    .map((seg) =>
      seg.roles.length
        ? `<mark class="${seg.roles.join(" ")}">${escapeHtml(seg.text)}</mark>`
        : escapeHtml(seg.text),
    )
    .join("");
  const chip = tuple.predicate.synthetic
    ? `<span class="chip predicate" title="synthetic predicate">${escapeHtml(tuple.predicate.surface)}</span> `
    : "";
  return chip + body;
}

export function renderedTextContent(html: string): string {
  return html
    .replace(/<span class="chip[^>]*>.*?<\/span> /, "")
    .replace(/<[^>]+>/g, "")
    .replace(/&amp;/g, "&")
    .replace(/&lt;/g, "<")
    .replace(/&gt;/g, ">")
    .replace(/&quot;/g, '"');
}
