// View state for the single-page workbench. Transitions are pure; app.ts
// owns the (single) mutable reference and re-renders after every change.

import type { DatasetMeta, SentenceAnnotations, SentencePage } from "./api.js";
import type { AnnotationDraft } from "./editor.js";
import type { JudgmentDraft } from "./judgment.js";

export interface ViewState {
  datasets: DatasetMeta[];
  selectedDataset: string | null;
  page: number;
  pageSize: number;
  sentences: SentencePage | null;
  selected: SentenceAnnotations | null;
  judgmentDraft: JudgmentDraft | null;
  annotationDraft: AnnotationDraft | null;
  cropAt: number | null;
  judgeId: string;
}

export function initialState(): ViewState {
  return {
    datasets: [],
    selectedDataset: null,
    page: 1,
    pageSize: 25,
    sentences: null,
    selected: null,
    judgmentDraft: null,
    annotationDraft: null,
    cropAt: 70,
    judgeId: "judge-a",
  };
}

export function withDatasets(state: ViewState, datasets: DatasetMeta[]): ViewState {
  return { ...state, datasets };
}

/** Selecting a dataset resets pagination, the open sentence and any drafts. */
export function selectDataset(state: ViewState, name: string): ViewState {
  return {
    ...state,
    selectedDataset: name,
    page: 1,
    sentences: null,
    selected: null,
    judgmentDraft: null,
    annotationDraft: null,
  };
}

export function withSentences(state: ViewState, page: SentencePage): ViewState {
  return { ...state, sentences: page };
}

export function withSelected(state: ViewState, selected: SentenceAnnotations | null): ViewState {
  return { ...state, selected, judgmentDraft: null, annotationDraft: null };
}

export function totalPages(state: ViewState): number {
  if (!state.sentences) return 1;
  return Math.max(1, Math.ceil(state.sentences.total / state.pageSize));
}

export function gotoPage(state: ViewState, page: number): ViewState {
  const clamped = Math.min(Math.max(1, page), totalPages(state));
  if (clamped === state.page) return state;
  return { ...state, page: clamped, sentences: null, selected: null };
}

export function setCrop(state: ViewState, cropAt: number | null): ViewState {
  return { ...state, cropAt };
}

export function setJudge(state: ViewState, judgeId: string): ViewState {
  return { ...state, judgeId: judgeId || "judge-a" };
}
