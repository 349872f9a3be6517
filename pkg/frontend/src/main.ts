/** Browser entry point: render loop and event wiring. */

import { ApiClient } from "./api.js";
import { renderApp } from "./render.js";
import {
  AppState,
  addInsight,
  backToReview,
  downloadExport,
  generateReport,
  initialState,
  stageEdit,
  toggleSelect,
  uploadTable,
} from "./state.js";

const client = new ApiClient("");
let state: AppState = initialState();

function apply(next: AppState): void {
  state = next;
  paint();
}

async function applyAsync(next: Promise<AppState>): Promise<void> {
  apply(await next);
}

function saveAs(name: string, text: string, mime: string): void {
  const url = URL.createObjectURL(new Blob([text], { type: mime }));
  const a = document.createElement("a");
  a.href = url;
  a.download = name;
  a.click();
  URL.revokeObjectURL(url);
}

function wire(root: HTMLElement): void {
  root.addEventListener("submit", (event) => {
    const form = event.target as HTMLFormElement;
    event.preventDefault();
    if (form.id === "upload-form") {
      const data = new FormData(form);
      const file = data.get("file") as File | null;
      if (!file) {
        return;
      }
      void file.text().then((csv) =>
        applyAsync(
          uploadTable(state, client, {
            csv,
            title: String(data.get("title") ?? ""),
            subject: String(data.get("subject") ?? "other"),
            chart_kind: String(data.get("chart_kind") ?? "none"),
          }),
        ),
      );
    } else if (form.id === "add-form") {
      const text = String(new FormData(form).get("text") ?? "").trim();
      if (text) {
        void applyAsync(addInsight(state, client, text));
      }
    }
  });

  root.addEventListener("change", (event) => {
    const el = event.target as HTMLElement;
    if (el.classList.contains("select")) {
      apply(toggleSelect(state, el.dataset.id ?? ""));
    }
  });

  root.addEventListener("click", (event) => {
    const el = event.target as HTMLElement;
    if (el.classList.contains("stage-edit")) {
      const id = el.dataset.id ?? "";
      const box = root.querySelector<HTMLTextAreaElement>(`textarea.edit-text[data-id="${id}"]`);
      if (box) {
        apply(stageEdit(state, id, box.value));
      }
    } else if (el.id === "generate") {
      void applyAsync(generateReport(state, client));
    } else if (el.id === "back") {
      apply(backToReview(state));
    } else if (el.id === "export-plain" || el.id === "export-markdown") {
      const format = el.id === "export-plain" ? "plain" : "markdown";
      void downloadExport(state, client, format).then((next) => {
        apply(next);
        if (next.exportText !== null) {
          const ext = format === "markdown" ? "md" : "txt";
          const mime = format === "markdown" ? "text/markdown" : "text/plain";
          saveAs(`report.${ext}`, next.exportText, mime);
        }
      });
    }
  });
}

function paint(): void {
  const root = document.getElementById("app");
  if (root) {
    root.innerHTML = renderApp(state);
  }
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) {
    wire(root);
    paint();
  }
}
