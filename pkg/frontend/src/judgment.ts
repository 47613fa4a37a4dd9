// Judgment panel state. The one hard rule lives here and on the server: an
// out-of-scope verdict excludes every other error class, so selecting it
// disables (and clears) the rest of the class controls.

export const OUT_OF_SCOPE = "out_of_scope";

/** Classes a judge can attach to a predicted extraction. "missing" is absent
 * on purpose: it targets gold tuples, not extractions. */
export const EXTRACTION_CLASSES = [
  "wrong_boundaries",
  "redundant",
  "uninformative",
  "wrong",
  OUT_OF_SCOPE,
] as const;

export interface LabelSelection {
  part: string;
  cls: string;
}

export interface JudgmentDraft {
  targetId: string;
  correct: boolean;
  labels: LabelSelection[];
  comment: string;
}

export function emptyDraft(targetId: string): JudgmentDraft {
  return { targetId, correct: false, labels: [], comment: "" };
}

export function hasOutOfScope(draft: JudgmentDraft): boolean {
  return draft.labels.some((l) => l.cls === OUT_OF_SCOPE);
}

/** Classes whose controls must be disabled given the current selection. */
export function disabledClasses(draft: JudgmentDraft): Set<string> {
  if (!hasOutOfScope(draft)) return new Set();
  return new Set(EXTRACTION_CLASSES.filter((c) => c !== OUT_OF_SCOPE));
}

function sameLabel(a: LabelSelection, b: LabelSelection): boolean {
  return a.part === b.part && a.cls === b.cls;
}

/** Toggle one (part, class) checkbox. Selecting out-of-scope clears all other
 * labels and pins the part to "whole"; selecting a disabled class is a no-op. */
export function toggleLabel(draft: JudgmentDraft, part: string, cls: string): JudgmentDraft {
  if (cls === OUT_OF_SCOPE) {
    if (hasOutOfScope(draft)) {
      return { ...draft, labels: draft.labels.filter((l) => l.cls !== OUT_OF_SCOPE) };
    }
    return { ...draft, labels: [{ part: "whole", cls: OUT_OF_SCOPE }] };
  }
  if (disabledClasses(draft).has(cls)) return draft;
  const label = { part, cls };
  const present = draft.labels.some((l) => sameLabel(l, label));
  return {
    ...draft,
    labels: present
      ? draft.labels.filter((l) => !sameLabel(l, label))
      : [...draft.labels, label],
  };
}

export function setCorrect(draft: JudgmentDraft, correct: boolean): JudgmentDraft {
  return { ...draft, correct };
}

export function setComment(draft: JudgmentDraft, comment: string): JudgmentDraft {
  return { ...draft, comment };
}

/** null when submittable, else the reason. Mirrors the server-side rule; the
 * server stays authoritative. */
export function draftProblem(draft: JudgmentDraft): string | null {
  if (!draft.targetId) return "no extraction selected";
  if (hasOutOfScope(draft) && draft.labels.length > 1) {
    return "out of scope excludes all other error classes";
  }
  return null;
}

export function draftPayload(draft: JudgmentDraft): {
  target_kind: string;
  target_id: string;
  correct: boolean;
  labels: [string, string][];
  comment?: string;
} {
  return {
    target_kind: "extraction",
    target_id: draft.targetId,
    correct: draft.correct,
    labels: draft.labels.map((l) => [l.part, l.cls] as [string, string]),
    ...(draft.comment ? { comment: draft.comment } : {}),
  };
}
