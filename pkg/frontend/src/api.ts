// Typed client for the benchmark service. Every number shown in the UI comes
// straight from these payloads; the client never recomputes a score or tally.

export interface DatasetMeta {
  name: string;
  type: string;
  domain: string;
  sentence_count: number;
  tuple_count: number;
}

export interface SpanObj {
  start: number;
  end: number;
  surface: string;
  synthetic?: boolean;
}

export interface TupleObj {
  id: string;
  predicate: SpanObj;
  args: SpanObj[];
  confidence?: number;
  provenance?: string;
}

export interface SystemBlock {
  system: string;
  color: string;
  tuples: TupleObj[];
}

export type LabelPair = [part: string, cls: string];

export interface JudgmentObj {
  id: string;
  target_kind: string;
  target_id: string;
  judge_id: string;
  correct: boolean;
  labels: LabelPair[];
  system: string | null;
  comment: string | null;
  timestamp: number;
}

export interface SentenceAnnotations {
  uid: string;
  dataset: string;
  doc_id: string;
  sent_idx: number;
  sent_id: string;
  text: string;
  gold: TupleObj[];
  systems: SystemBlock[];
  judgments: JudgmentObj[];
}

export interface SentenceEntry {
  uid: string;
  sent_id: string;
  doc_id: string;
  sent_idx: number;
  text: string;
  gold_count: number;
  systems: Record<string, number>;
}

export interface SentencePage {
  total: number;
  page: number;
  page_size: number;
  sentences: SentenceEntry[];
}

export interface ReportObj {
  dataset: string;
  system: string;
  strategy: string;
  n_predicted: number;
  n_gold: number;
  n_matched: number;
  precision: number;
  recall: number;
  f2: number;
  precision_pct: string;
  recall_pct: string;
  f2_pct: string;
}

export interface ChartSeriesObj {
  kind: string;
  axes: string[];
  series: { system: string; counts: number[] }[];
  crop_at: number | null;
}

export interface JudgmentPayload {
  target_kind: string;
  target_id: string;
  correct: boolean;
  labels: LabelPair[];
  system?: string;
  comment?: string;
}

export interface AnnotationPayload {
  uid: string;
  predicate: { start: number; end: number };
  args: { start: number; end: number }[];
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep statusText
    }
    throw new ApiError(response.status, detail);
  }
  return response.json() as Promise<T>;
}

export class ApiClient {
  constructor(private base: string = "") {}

  private url(path: string, params?: Record<string, string | number | undefined>): string {
    const search = new URLSearchParams();
    for (const [key, value] of Object.entries(params ?? {})) {
      if (value !== undefined) search.set(key, String(value));
    }
    const query = search.toString();
    return this.base + path + (query ? `?${query}` : "");
  }

  listDatasets(): Promise<DatasetMeta[]> {
    return fetch(this.url("/datasets")).then((r) => unwrap<DatasetMeta[]>(r));
  }

  getSentences(dataset: string, page: number, pageSize: number): Promise<SentencePage> {
    return fetch(
      this.url(`/datasets/${encodeURIComponent(dataset)}/sentences`, {
        page,
        page_size: pageSize,
      }),
    ).then((r) => unwrap<SentencePage>(r));
  }

  getAnnotations(uid: string): Promise<SentenceAnnotations> {
    return fetch(this.url(`/sentences/${uid}/annotations`)).then((r) =>
      unwrap<SentenceAnnotations>(r),
    );
  }

  submitJudgment(payload: JudgmentPayload, judgeId: string): Promise<JudgmentObj> {
    return fetch(this.url("/judgments"), {
      method: "POST",
      headers: { "Content-Type": "application/json", "X-Judge-Id": judgeId },
      body: JSON.stringify(payload),
    }).then((r) => unwrap<JudgmentObj>(r));
  }

  createAnnotation(payload: AnnotationPayload): Promise<TupleObj> {
    return fetch(this.url("/annotations"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    }).then((r) => unwrap<TupleObj>(r));
  }

  updateAnnotation(id: string, payload: Omit<AnnotationPayload, "uid">): Promise<TupleObj> {
    return fetch(this.url(`/annotations/${id}`), {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    }).then((r) => unwrap<TupleObj>(r));
  }

  deleteAnnotation(id: string): Promise<{ deleted: string }> {
    return fetch(this.url(`/annotations/${id}`), { method: "DELETE" }).then((r) =>
      unwrap<{ deleted: string }>(r),
    );
  }

  getReports(dataset?: string): Promise<{ reports: ReportObj[] }> {
    return fetch(this.url("/reports", { dataset })).then((r) =>
      unwrap<{ reports: ReportObj[] }>(r),
    );
  }

  getCharts(cropAt?: number, dataset?: string): Promise<ChartSeriesObj> {
    return fetch(this.url("/charts", { crop_at: cropAt, dataset })).then((r) =>
      unwrap<ChartSeriesObj>(r),
    );
  }

  scoresCsvUrl(): string {
    return this.url("/export/scores.csv");
  }

  errorsCsvUrl(): string {
    return this.url("/export/errors.csv");
  }
}
