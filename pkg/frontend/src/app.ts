// DOM shell: wires the pure modules to the service. Three panels: sentence
// browser (left), sentence detail with judgment panel and annotation editor
// (right), dashboards (bottom).

import { ApiClient, ApiError } from "./api.js";
import type { SentenceAnnotations, TupleObj } from "./api.js";
import { renderBarsSvg, renderKiviatSvg, renderScoreTable } from "./charts.js";
import * as editor from "./editor.js";
import { escapeHtml, renderTupleHtml } from "./highlight.js";
import * as judgment from "./judgment.js";
import * as view from "./state.js";

const api = new ApiClient("");
let state = view.initialState();

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function flash(message: string, isError = false): void {
  const bar = $("flash");
  bar.textContent = message;
  bar.className = isError ? "flash error" : "flash";
  if (message) setTimeout(() => (bar.textContent = ""), 4000);
}

async function guard<T>(work: Promise<T>): Promise<T | null> {
  try {
    return await work;
  } catch (err) {
    flash(err instanceof ApiError ? `server: ${err.message}` : String(err), true);
    return null;
  }
}

// ------------------------------------------------------------ sentence list

async function loadDatasets(): Promise<void> {
  const datasets = await guard(api.listDatasets());
  if (!datasets) return;
  state = view.withDatasets(state, datasets);
  const select = $("dataset-select") as HTMLSelectElement;
  select.innerHTML = datasets
    .map(
      (d) =>
        `<option value="${escapeHtml(d.name)}">${escapeHtml(d.name)} (${d.sentence_count} sentences, ${d.tuple_count} tuples, ${escapeHtml(d.type)})</option>`,
    )
    .join("");
  if (datasets.length && !state.selectedDataset) {
    state = view.selectDataset(state, datasets[0].name);
    await loadSentences();
  }
}

async function loadSentences(): Promise<void> {
  if (!state.selectedDataset) return;
  const page = await guard(api.getSentences(state.selectedDataset, state.page, state.pageSize));
  if (!page) return;
  state = view.withSentences(state, page);
  const list = $("sentence-list");
  list.innerHTML = page.sentences
    .map((s) => {
      const counts = Object.entries(s.systems)
        .map(([name, n]) => `${escapeHtml(name)}: ${n}`)
        .join(", ");
      return (
        `<li><button class="sentence" data-uid="${escapeHtml(s.uid)}">` +
        `<span class="text">${escapeHtml(s.text)}</span>` +
        `<span class="counts">gold: ${s.gold_count}${counts ? " | " + counts : ""}</span>` +
        `</button></li>`
      );
    })
    .join("");
  $("page-label").textContent = `page ${state.page} / ${view.totalPages(state)} (${page.total} sentences)`;
  list.querySelectorAll("button.sentence").forEach((btn) => {
    btn.addEventListener("click", () => openSentence((btn as HTMLElement).dataset.uid ?? ""));
  });
}

// ------------------------------------------------------------ sentence view

async function openSentence(uid: string): Promise<void> {
  const annotations = await guard(api.getAnnotations(uid));
  if (!annotations) return;
  state = view.withSelected(state, annotations);
  renderSentence();
}

function judgmentsFor(annotations: SentenceAnnotations, tupleId: string): string {
  const entries = annotations.judgments.filter((j) => j.target_id === tupleId);
  if (!entries.length) return "";
  return entries
    .map((j) => {
      const labels = j.labels.map(([part, cls]) => `${part}:${cls}`).join(", ");
      return `<span class="verdict ${j.correct ? "ok" : "bad"}" title="${escapeHtml(j.comment ?? "")}">${escapeHtml(j.judge_id)}: ${j.correct ? "correct" : labels || "incorrect"}</span>`;
    })
    .join(" ");
}

function tupleLane(
  annotations: SentenceAnnotations,
  tuple: TupleObj,
  color: string,
  deletable: boolean,
): string {
  return (
    `<div class="lane" style="border-left-color:${color}">` +
    `<div class="lane-text">${renderTupleHtml(annotations.text, tuple)}</div>` +
    `<div class="lane-meta">` +
    `<button class="judge" data-tuple="${escapeHtml(tuple.id)}">judge</button>` +
    (deletable
      ? `<button class="delete" data-tuple="${escapeHtml(tuple.id)}" title="delete annotation">delete</button>`
      : "") +
    judgmentsFor(annotations, tuple.id) +
    `</div></div>`
  );
}

function renderSentence(): void {
  const annotations = state.selected;
  const panel = $("sentence-view");
  if (!annotations) {
    panel.innerHTML = "<p class=\"hint\">select a sentence</p>";
    return;
  }
  const legend =
    `<div class="legend">` +
    `<span class="legend-entry"><span class="swatch gold"></span>gold</span>` +
    annotations.systems
      .map(
        (s) =>
          `<span class="legend-entry"><span class="swatch" style="background:${s.color}"></span>${escapeHtml(s.system)}</span>`,
      )
      .join("") +
    `</div>`;
  const goldLanes = annotations.gold
    .map((t) => tupleLane(annotations, t, "#b59f00", t.provenance === "manual"))
    .join("");
  const systemLanes = annotations.systems
    .map(
      (block) =>
        `<h4 style="color:${block.color}">${escapeHtml(block.system)}</h4>` +
        block.tuples.map((t) => tupleLane(annotations, t, block.color, false)).join(""),
    )
    .join("");
  panel.innerHTML =
    `<p class="sentence-text" id="sentence-text">${escapeHtml(annotations.text)}</p>` +
    legend +
    `<h4>gold</h4>` +
    goldLanes +
    systemLanes +
    `<button id="add-annotation">Add new OIE relation</button>` +
    `<div id="editor"></div><div id="judgment-panel"></div>`;
  panel.querySelectorAll("button.judge").forEach((btn) => {
    btn.addEventListener("click", () => {
      state = { ...state, judgmentDraft: judgment.emptyDraft((btn as HTMLElement).dataset.tuple ?? "") };
      renderJudgmentPanel();
    });
  });
  panel.querySelectorAll("button.delete").forEach((btn) => {
    btn.addEventListener("click", async () => {
      const id = (btn as HTMLElement).dataset.tuple ?? "";
      if (await guard(api.deleteAnnotation(id))) {
        flash("annotation deleted");
        await openSentence(annotations.uid);
      }
    });
  });
  $("add-annotation").addEventListener("click", () => {
    state = { ...state, annotationDraft: editor.startDraft(annotations.uid, annotations.text) };
    renderEditor();
  });
}

// ---------------------------------------------------------- judgment panel

function renderJudgmentPanel(): void {
  const host = $("judgment-panel");
  const draft = state.judgmentDraft;
  if (!draft) {
    host.innerHTML = "";
    return;
  }
  const disabled = judgment.disabledClasses(draft);
  const parts = ["whole", "predicate", "argument:0", "argument:1"];
  const grid = judgment.EXTRACTION_CLASSES.map((cls) => {
    const options =
      cls === judgment.OUT_OF_SCOPE
        ? [`<label><input type="checkbox" data-part="whole" data-cls="${cls}" ${judgment.hasOutOfScope(draft) ? "checked" : ""}/> whole</label>`]
        : parts.map((part) => {
            const checked = draft.labels.some((l) => l.part === part && l.cls === cls);
            return `<label><input type="checkbox" data-part="${part}" data-cls="${cls}" ${checked ? "checked" : ""} ${disabled.has(cls) ? "disabled" : ""}/> ${part}</label>`;
          });
    return `<fieldset class="cls ${disabled.has(cls) ? "disabled" : ""}"><legend>${cls}</legend>${options.join(" ")}</fieldset>`;
  }).join("");
  host.innerHTML =
    `<h4>judge ${escapeHtml(draft.targetId)}</h4>` +
    `<label><input type="checkbox" id="correct-toggle" ${draft.correct ? "checked" : ""}/> correct</label>` +
    grid +
    `<input id="judgment-comment" placeholder="comment on error cause" value="${escapeHtml(draft.comment)}"/>` +
    `<button id="submit-judgment">submit judgment</button>`;
  host.querySelectorAll("input[data-cls]").forEach((box) => {
    box.addEventListener("change", () => {
      const el = box as HTMLInputElement;
      state = {
        ...state,
        judgmentDraft: judgment.toggleLabel(draft, el.dataset.part ?? "whole", el.dataset.cls ?? ""),
      };
      renderJudgmentPanel();
    });
  });
  $("correct-toggle").addEventListener("change", (e) => {
    state = {
      ...state,
      judgmentDraft: judgment.setCorrect(draft, (e.target as HTMLInputElement).checked),
    };
    renderJudgmentPanel();
  });
  $("judgment-comment").addEventListener("change", (e) => {
    state = {
      ...state,
      judgmentDraft: judgment.setComment(draft, (e.target as HTMLInputElement).value),
    };
  });
  $("submit-judgment").addEventListener("click", async () => {
    const current = state.judgmentDraft;
    if (!current) return;
    const problem = judgment.draftProblem(current);
    if (problem) {
      flash(problem, true);
      return;
    }
    const stored = await guard(api.submitJudgment(judgment.draftPayload(current), state.judgeId));
    if (stored && state.selected) {
      flash("judgment recorded");
      await openSentence(state.selected.uid);
      await loadDashboards();
    }
  });
}

// --------------------------------------------------------- annotation editor

function currentSelection(): editor.SpanSel | null {
  const textNode = document.getElementById("sentence-text");
  const selection = window.getSelection();
  if (!textNode || !selection || selection.rangeCount === 0) return null;
  const range = selection.getRangeAt(0);
  if (!textNode.contains(range.startContainer) || !textNode.contains(range.endContainer)) {
    return null;
  }
  return { start: range.startOffset, end: range.endOffset };
}

function renderEditor(): void {
  const host = $("editor");
  const draft = state.annotationDraft;
  if (!draft) {
    host.innerHTML = "";
    return;
  }
  const predicate = draft.predicate
    ? `<mark class="predicate">${escapeHtml(draft.text.slice(draft.predicate.start, draft.predicate.end))}</mark>`
    : "<em>none</em>";
  const args = draft.args
    .map(
      (a, i) =>
        `<span class="arg-chip"><mark class="argument">${escapeHtml(draft.text.slice(a.start, a.end))}</mark>` +
        `<button class="drop-arg" data-i="${i}">x</button></span>`,
    )
    .join(" ");
  host.innerHTML =
    `<h4>new annotation</h4>` +
    `<p class="hint">select text in the sentence above, then mark it</p>` +
    `<button id="mark-predicate">mark predicate</button>` +
    `<button id="mark-argument">add argument</button>` +
    `<p>predicate: ${predicate}</p><p>arguments: ${args || "<em>none</em>"}</p>` +
    `<button id="submit-annotation" ${editor.canSubmit(draft) ? "" : "disabled"}>save annotation</button>`;
  $("mark-predicate").addEventListener("click", () => {
    const sel = currentSelection();
    if (sel) state = { ...state, annotationDraft: editor.markPredicate(draft, sel) };
    renderEditor();
  });
  $("mark-argument").addEventListener("click", () => {
    const sel = currentSelection();
    if (sel) state = { ...state, annotationDraft: editor.addArgument(draft, sel) };
    renderEditor();
  });
  host.querySelectorAll("button.drop-arg").forEach((btn) => {
    btn.addEventListener("click", () => {
      const i = Number((btn as HTMLElement).dataset.i);
      state = { ...state, annotationDraft: editor.removeArgument(draft, i) };
      renderEditor();
    });
  });
  $("submit-annotation").addEventListener("click", async () => {
    const current = state.annotationDraft;
    if (!current || !editor.canSubmit(current)) return;
    const created = await guard(api.createAnnotation(editor.draftPayload(current)));
    if (created && state.selected) {
      flash("annotation saved");
      await openSentence(state.selected.uid);
    }
  });
}

// ---------------------------------------------------------------- dashboards

async function loadDashboards(): Promise<void> {
  const reports = await guard(api.getReports());
  if (reports) $("score-table").innerHTML = renderScoreTable(reports.reports);
  const charts = await guard(api.getCharts(state.cropAt ?? undefined));
  if (charts) {
    const colors: Record<string, string> = {};
    const palette = ["#2266aa", "#aa3322", "#22aa66", "#8855cc", "#aa7711", "#117788"];
    charts.series.forEach((s, i) => (colors[s.system] = palette[i % palette.length]));
    $("kiviat").innerHTML = renderKiviatSvg(charts, colors);
    $("bars").innerHTML = renderBarsSvg(charts, colors);
  }
  ($("scores-csv") as HTMLAnchorElement).href = api.scoresCsvUrl();
  ($("errors-csv") as HTMLAnchorElement).href = api.errorsCsvUrl();
}

// --------------------------------------------------------------------- init

export function init(): void {
  ($("dataset-select") as HTMLSelectElement).addEventListener("change", async (e) => {
    state = view.selectDataset(state, (e.target as HTMLSelectElement).value);
    await loadSentences();
    renderSentence();
  });
  $("prev-page").addEventListener("click", async () => {
    state = view.gotoPage(state, state.page - 1);
    await loadSentences();
  });
  $("next-page").addEventListener("click", async () => {
    state = view.gotoPage(state, state.page + 1);
    await loadSentences();
  });
  ($("judge-id") as HTMLInputElement).addEventListener("change", (e) => {
    state = view.setJudge(state, (e.target as HTMLInputElement).value);
  });
  ($("crop-input") as HTMLInputElement).addEventListener("change", async (e) => {
    const raw = (e.target as HTMLInputElement).value;
    state = view.setCrop(state, raw ? Number(raw) : null);
    await loadDashboards();
  });
  void loadDatasets().then(loadDashboards);
}

if (typeof document !== "undefined" && document.getElementById("dataset-select")) {
  init();
}
