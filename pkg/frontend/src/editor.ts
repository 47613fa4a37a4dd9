// Annotation editor draft: mark a predicate, then arguments, then submit.
// Selections are raw character offsets into the displayed sentence; no token
// snapping. Every span is validated against the text before it enters the
// draft, so whatever reaches the server satisfies 0 <= start < end <= length.

export interface SpanSel {
  start: number;
  end: number;
}

export interface AnnotationDraft {
  uid: string;
  text: string;
  predicate: SpanSel | null;
  args: SpanSel[];
}

export function startDraft(uid: string, text: string): AnnotationDraft {
  return { uid, text, predicate: null, args: [] };
}

export function selectionValid(text: string, sel: SpanSel): boolean {
  return (
    Number.isInteger(sel.start) &&
    Number.isInteger(sel.end) &&
    sel.start >= 0 &&
    sel.start < sel.end &&
    sel.end <= text.length
  );
}

export function markPredicate(draft: AnnotationDraft, sel: SpanSel): AnnotationDraft {
  if (!selectionValid(draft.text, sel)) return draft;
  return { ...draft, predicate: sel };
}

export function addArgument(draft: AnnotationDraft, sel: SpanSel): AnnotationDraft {
  if (!selectionValid(draft.text, sel)) return draft;
  return { ...draft, args: [...draft.args, sel] };
}

export function removeArgument(draft: AnnotationDraft, index: number): AnnotationDraft {
  return { ...draft, args: draft.args.filter((_, i) => i !== index) };
}

/** Submission needs a marked predicate; arguments are optional (unary and
 * even zero-argument tuples are legal). */
export function canSubmit(draft: AnnotationDraft): boolean {
  return draft.predicate !== null && selectionValid(draft.text, draft.predicate);
}

export function draftPayload(draft: AnnotationDraft): {
  uid: string;
  predicate: SpanSel;
  args: SpanSel[];
} {
  if (!draft.predicate) throw new Error("draft has no predicate");
  return { uid: draft.uid, predicate: draft.predicate, args: draft.args };
}
