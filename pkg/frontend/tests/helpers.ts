/** Test doubles: a fetch stub that replays fixtures recorded from the real API. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type {
  Candidate,
  InsightList,
  ApiError,
  Report,
  SessionView,
} from "../src/api.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixtureText(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf8");
}

export function fixture<T>(name: string): T {
  return JSON.parse(fixtureText(name)) as T;
}

export interface RecordedCall {
  method: string;
  url: string;
  body: unknown;
  headers: Record<string, string>;
}

export interface FakeServer {
  fetchImpl: (url: string, init?: RequestInit) => Promise<Response>;
  calls: RecordedCall[];
  session: SessionView;
  report: Report;
  edited: Candidate;
  listing: InsightList;
  ragged: ApiError;
}

export const RAGGED_CSV = "X,Y\na,1\nb,2,3\n";

export function fakeServer(): FakeServer {
  const session = fixture<SessionView>("session_cheese.json");
  const report = fixture<Report>("report_cheese.json");
  const edited = fixture<Candidate>("candidate_edited.json");
  const listing = fixture<InsightList>("insights_after_report.json");
  const ragged = fixture<ApiError>("error_ragged.json");
  const calls: RecordedCall[] = [];

  const json = (payload: unknown, status = 200) =>
    new Response(JSON.stringify(payload), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  const text = (payload: string, type: string) =>
    new Response(payload, {
      status: 200,
      headers: { "Content-Type": `${type}; charset=utf-8` },
    });

  const fetchImpl = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    calls.push({
      method,
      url,
      body,
      headers: (init?.headers ?? {}) as Record<string, string>,
    });

    if (method === "POST" && url === "/sessions") {
      const csv = (body as { csv?: string }).csv ?? "";
      return csv === RAGGED_CSV ? json(ragged, 400) : json(session, 201);
    }
    if (method === "PATCH" && url === `/sessions/${session.id}/insights/${edited.id}`) {
      return json(edited);
    }
    if (method === "POST" && url === `/sessions/${session.id}/insights`) {
      const added: Candidate = {
        id: "user0000add1",
        linearized: "",
        insight_type: null,
        text: (body as { text: string }).text,
        faithfulness: 1.0,
        rec_score: 0.85,
        source: "USER_ADDED",
      };
      return json(added, 201);
    }
    if (method === "POST" && url === `/sessions/${session.id}/report`) {
      return json(report);
    }
    if (method === "GET" && url === `/sessions/${session.id}/insights`) {
      return json(listing);
    }
    if (method === "GET" && url === `/reports/${report.id}?format=plain`) {
      return text(fixtureText("core_report.txt"), "text/plain");
    }
    if (method === "GET" && url === `/reports/${report.id}?format=markdown`) {
      return text(fixtureText("core_report.md"), "text/markdown");
    }
    return json(
      { code: "NotFound", message: `no route ${method} ${url}`, detail: "" },
      404,
    );
  };

  return { fetchImpl, calls, session, report, edited, listing, ragged };
}

/** The report body embedded in the core golden: between the blank line and the trailing newline. */
export function goldenBody(): string {
  const golden = fixtureText("core_report.txt");
  const start = golden.indexOf("\n\n") + 2;
  return golden.slice(start, golden.length - 1);
}
