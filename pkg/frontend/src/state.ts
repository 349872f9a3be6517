/**
 * Workflow state for the analyst loop: upload -> review -> report.
 *
 * State transitions are plain async functions over an immutable AppState.
 * Selections toggle optimistically; after any server mutation the response
 * is folded back in, so the server stays authoritative for scores, text,
 * and selection flags.
 */

import {
  ApiClient,
  ApiError,
  ApiRequestError,
  Candidate,
  ExportFormat,
  NewSession,
  Report,
  SessionView,
} from "./api.js";

export type Phase = "upload" | "review" | "report";

export interface AppState {
  phase: Phase;
  session: SessionView | null;
  /** Optimistic selection, in click order; the server receives it verbatim. */
  selected: string[];
  /** Staged edit text by insight id; sent as PATCHes when generating. */
  edits: Record<string, string>;
  report: Report | null;
  exportText: string | null;
  exportFormat: ExportFormat | null;
  error: ApiError | null;
}

export function initialState(): AppState {
  return {
    phase: "upload",
    session: null,
    selected: [],
    edits: {},
    report: null,
    exportText: null,
    exportFormat: null,
    error: null,
  };
}

/** API failures land in state.error; anything else is a bug and propagates. */
function fail(state: AppState, err: unknown): AppState {
  if (err instanceof ApiRequestError) {
    return { ...state, error: err.payload };
  }
  throw err;
}

function withCandidate(session: SessionView, updated: Candidate): SessionView {
  const known = session.candidates.some((c) => c.id === updated.id);
  return {
    ...session,
    candidates: known
      ? session.candidates.map((c) => (c.id === updated.id ? updated : c))
      : [...session.candidates, updated],
  };
}

export async function uploadTable(
  state: AppState,
  client: ApiClient,
  input: NewSession,
): Promise<AppState> {
  try {
    const session = await client.createSession(input);
    return {
      ...initialState(),
      phase: "review",
      session,
      selected: [...session.selections],
    };
  } catch (err) {
    return fail(state, err);
  }
}

export function toggleSelect(state: AppState, id: string): AppState {
  if (!state.session || !state.session.candidates.some((c) => c.id === id)) {
    return state;
  }
  const selected = state.selected.includes(id)
    ? state.selected.filter((x) => x !== id)
    : [...state.selected, id];
  return { ...state, selected };
}

export function stageEdit(state: AppState, id: string, text: string): AppState {
  if (!state.session || !state.session.candidates.some((c) => c.id === id)) {
    return state;
  }
  return { ...state, edits: { ...state.edits, [id]: text } };
}

export function canGenerate(state: AppState): boolean {
  return state.phase === "review" && state.session !== null && state.selected.length > 0;
}

export async function addInsight(
  state: AppState,
  client: ApiClient,
  text: string,
): Promise<AppState> {
  if (!state.session) {
    return state;
  }
  try {
    const candidate = await client.addInsight(state.session.id, text);
    return { ...state, session: withCandidate(state.session, candidate), error: null };
  } catch (err) {
    return fail(state, err);
  }
}

/** Apply staged edits (server rescored), then fuse the selection. */
export async function generateReport(
  state: AppState,
  client: ApiClient,
): Promise<AppState> {
  if (!state.session || !canGenerate(state)) {
    return state;
  }
  try {
    let session = state.session;
    for (const [id, text] of Object.entries(state.edits)) {
      const updated = await client.editInsight(session.id, id, text);
      session = withCandidate(session, updated);
    }
    const report = await client.generateReport(session.id, state.selected);
    return {
      ...state,
      phase: "report",
      session: {
        ...session,
        selections: [...report.insight_ids],
        report_ids: session.report_ids.includes(report.id)
          ? session.report_ids
          : [...session.report_ids, report.id],
      },
      selected: [...report.insight_ids],
      edits: {},
      report,
      exportText: null,
      exportFormat: null,
      error: null,
    };
  } catch (err) {
    return fail(state, err);
  }
}

export async function downloadExport(
  state: AppState,
  client: ApiClient,
  format: ExportFormat,
): Promise<AppState> {
  if (!state.report) {
    return state;
  }
  try {
    const text = await client.exportReport(state.report.id, format);
    return { ...state, exportText: text, exportFormat: format, error: null };
  } catch (err) {
    return fail(state, err);
  }
}

/** Re-pull candidates and selection flags; used after reload. */
export async function refreshFromServer(
  state: AppState,
  client: ApiClient,
): Promise<AppState> {
  if (!state.session) {
    return state;
  }
  try {
    const listing = await client.listInsights(state.session.id);
    return {
      ...state,
      session: {
        ...state.session,
        candidates: listing.candidates,
        recommended_ids: listing.recommended_ids,
        selections: listing.selections,
      },
      selected: [...listing.selections],
    };
  } catch (err) {
    return fail(state, err);
  }
}

export function backToReview(state: AppState): AppState {
  if (!state.session) {
    return state;
  }
  return { ...state, phase: "review", exportText: null, exportFormat: null };
}
