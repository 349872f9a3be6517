/**
 * Pure HTML-string renderers for the three views.
 *
 * No DOM access and no derived numbers: every figure on screen comes
 * straight from an API payload, which keeps these functions trivially
 * snapshot-testable.
 */

import { Candidate, TableView } from "./api.js";
import { AppState, canGenerate } from "./state.js";

export const PREVIEW_ROWS = 20;

const ESCAPES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
  "'": "&#39;",
};

export function escapeHtml(text: string): string {
  return text.replace(/[&<>"']/g, (ch) => ESCAPES[ch] as string);
}

/** Badge text is the API faithfulness rounded to two decimals, nothing else. */
export function confidenceBadge(faithfulness: number): string {
  return faithfulness.toFixed(2);
}

export function sortByRecScore(candidates: Candidate[]): Candidate[] {
  return [...candidates].sort((a, b) => b.rec_score - a.rec_score);
}

function errorBox(state: AppState): string {
  if (!state.error) {
    return "";
  }
  return (
    `<div class="error" role="alert"><strong>${escapeHtml(state.error.code)}</strong>` +
    `: ${escapeHtml(state.error.message)}</div>`
  );
}

export function tablePreview(table: TableView): string {
  const total = table.x_values.length;
  const shown = Math.min(total, PREVIEW_ROWS);
  const header = [table.x_name, ...table.y_columns.map((c) => c.name)];
  const head = header.map((h) => `<th>${escapeHtml(h)}</th>`).join("");
  const rows: string[] = [];
  for (let i = 0; i < shown; i++) {
    const cells = [
      table.x_values[i] ?? "",
      ...table.y_columns.map((c) => String(c.values[i] ?? "")),
    ];
    rows.push(`<tr>${cells.map((c) => `<td>${escapeHtml(c)}</td>`).join("")}</tr>`);
  }
  const note =
    total > shown
      ? `<p class="preview-note">${total - shown} more rows not shown</p>`
      : "";
  return (
    `<table class="preview"><thead><tr>${head}</tr></thead>` +
    `<tbody>${rows.join("")}</tbody></table>${note}`
  );
}

export function renderUpload(state: AppState): string {
  return `<section class="view view-upload">
  <h1>New table report</h1>
  ${errorBox(state)}
  <form id="upload-form">
    <label>Table (CSV)
      <input type="file" name="file" accept=".csv,text/csv" required>
    </label>
    <label>Context
      <input type="text" name="title" placeholder="What is this table about?" required>
    </label>
    <label>Subject
      <input type="text" name="subject" value="other">
    </label>
    <label>Chart kind
      <select name="chart_kind">
        <option value="none" selected>none</option>
        <option value="line">line</option>
        <option value="column">column</option>
        <option value="bar">bar</option>
        <option value="pie">pie</option>
      </select>
    </label>
    <button type="submit">Analyze</button>
  </form>
</section>`;
}

function candidateRow(state: AppState, c: Candidate): string {
  const id = escapeHtml(c.id);
  const staged = state.edits[c.id];
  const text = staged ?? c.text;
  const checked = state.selected.includes(c.id) ? " checked" : "";
  const recommended = state.session?.recommended_ids.includes(c.id)
    ? '<span class="tag tag-recommended">recommended</span>'
    : "";
  const editedTag =
    staged !== undefined ? '<span class="tag tag-edited">unsaved edit</span>' : "";
  return `<li class="candidate" data-id="${id}">
    <input type="checkbox" class="select" data-id="${id}"${checked}>
    <span class="badge" title="faithfulness">${confidenceBadge(c.faithfulness)}</span>
    <span class="tag tag-type">${escapeHtml(c.insight_type ?? "CUSTOM")}</span>
    <span class="tag tag-source">${escapeHtml(c.source)}</span>
    ${recommended}${editedTag}
    <span class="text">${escapeHtml(text)}</span>
    <details class="edit">
      <summary>edit</summary>
      <textarea class="edit-text" data-id="${id}">${escapeHtml(text)}</textarea>
      <button type="button" class="stage-edit" data-id="${id}">Stage edit</button>
    </details>
  </li>`;
}

export function renderCandidates(state: AppState): string {
  const session = state.session;
  if (!session) {
    return renderUpload(state);
  }
  const rows = sortByRecScore(session.candidates)
    .map((c) => candidateRow(state, c))
    .join("\n");
  const disabled = canGenerate(state) ? "" : " disabled";
  return `<section class="view view-review">
  <h1>${escapeHtml(session.context.title)}</h1>
  ${errorBox(state)}
  ${tablePreview(session.table)}
  <ul class="candidates">
${rows}
  </ul>
  <form id="add-form">
    <input type="text" name="text" placeholder="Add your own insight" required>
    <button type="submit">Add</button>
  </form>
  <button id="generate" type="button"${disabled}>Generate report</button>
</section>`;
}

export function renderReport(state: AppState): string {
  const report = state.report;
  if (!report) {
    return renderCandidates(state);
  }
  const exported =
    state.exportText !== null
      ? `<pre class="export" data-format="${escapeHtml(state.exportFormat ?? "")}">` +
        `${escapeHtml(state.exportText)}</pre>`
      : "";
  return `<section class="view view-report">
  <h1>${escapeHtml(report.title)}</h1>
  ${errorBox(state)}
  <p class="report-body">${escapeHtml(report.body)}</p>
  <p class="report-meta">${report.insight_ids.length} insights, report ${escapeHtml(report.id)}</p>
  <button id="export-plain" type="button">Export text</button>
  <button id="export-markdown" type="button">Export markdown</button>
  <button id="back" type="button">Back to insights</button>
  ${exported}
</section>`;
}

export function renderApp(state: AppState): string {
  switch (state.phase) {
    case "upload":
      return renderUpload(state);
    case "review":
      return renderCandidates(state);
    case "report":
      return renderReport(state);
  }
}
