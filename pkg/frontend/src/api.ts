/**
 * Typed client for the tableinsights REST service.
 *
 * Every shape here mirrors a server response verbatim; the UI never
 * derives scores or text on its own.
 */

export interface TableView {
  x_name: string;
  x_values: string[];
  y_columns: { name: string; values: number[] }[];
}

export interface ContextView {
  title: string;
  subject: string;
  chart_kind: string;
}

export interface Candidate {
  id: string;
  linearized: string;
  insight_type: string | null;
  text: string;
  faithfulness: number;
  rec_score: number;
  source: string;
}

export interface SessionView {
  id: string;
  table: TableView;
  context: ContextView;
  candidates: Candidate[];
  recommended_ids: string[];
  selections: string[];
  report_ids: string[];
}

export interface InsightList {
  session_id: string;
  candidates: Candidate[];
  recommended_ids: string[];
  selections: string[];
}

export interface Report {
  id: string;
  session_id: string;
  title: string;
  body: string;
  insight_ids: string[];
  created_at: string;
}

export interface NewSession {
  csv: string;
  title: string;
  subject?: string;
  chart_kind?: string;
  seed?: number;
}

export interface ApiError {
  code: string;
  message: string;
  detail: string;
}

export type ExportFormat = "plain" | "markdown";

export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly payload: ApiError,
  ) {
    super(`${payload.code}: ${payload.message}`);
    this.name = "ApiRequestError";
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function errorPayload(res: Response): Promise<ApiError> {
  try {
    const raw = (await res.json()) as Partial<ApiError>;
    return {
      code: raw.code ?? `HTTP_${res.status}`,
      message: raw.message ?? res.statusText,
      detail: raw.detail ?? "",
    };
  } catch {
    return { code: `HTTP_${res.status}`, message: res.statusText, detail: "" };
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async send(
    method: string,
    path: string,
    body?: unknown,
    idempotencyKey?: string,
  ): Promise<Response> {
    const headers: Record<string, string> = {};
    const init: RequestInit = { method, headers };
    if (body !== undefined) {
      headers["Content-Type"] = "application/json";
      init.body = JSON.stringify(body);
    }
    if (idempotencyKey !== undefined) {
      headers["Idempotency-Key"] = idempotencyKey;
    }
    const res = await this.fetchImpl(this.baseUrl + path, init);
    if (!res.ok) {
      throw new ApiRequestError(res.status, await errorPayload(res));
    }
    return res;
  }

  private async json<T>(
    method: string,
    path: string,
    body?: unknown,
    idempotencyKey?: string,
  ): Promise<T> {
    const res = await this.send(method, path, body, idempotencyKey);
    return (await res.json()) as T;
  }

  createSession(body: NewSession, idempotencyKey?: string): Promise<SessionView> {
    return this.json("POST", "/sessions", body, idempotencyKey);
  }

  listInsights(sessionId: string): Promise<InsightList> {
    return this.json("GET", `/sessions/${sessionId}/insights`);
  }

  editInsight(sessionId: string, insightId: string, text: string): Promise<Candidate> {
    return this.json("PATCH", `/sessions/${sessionId}/insights/${insightId}`, { text });
  }

  addInsight(sessionId: string, text: string): Promise<Candidate> {
    return this.json("POST", `/sessions/${sessionId}/insights`, { text });
  }

  generateReport(
    sessionId: string,
    selectedIds: string[],
    idempotencyKey?: string,
  ): Promise<Report> {
    return this.json(
      "POST",
      `/sessions/${sessionId}/report`,
      { selected_ids: selectedIds },
      idempotencyKey,
    );
  }

  async exportReport(reportId: string, format: ExportFormat): Promise<string> {
    const res = await this.send("GET", `/reports/${reportId}?format=${format}`);
    return res.text();
  }
}
