/** Thin typed client for the session service. */

import type { Hint, Selection, SessionPayload, Side } from "./types";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!res.ok) {
    let detail = res.statusText;
    try {
      const body = (await res.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(res.status, detail);
  }
  return (await res.json()) as T;
}

export class Client {
  constructor(private readonly base: string) {}

  createSession(opts: {
    a: string[];
    b: string[];
    rounds: number;
    variant?: "ms" | "atoms";
    humanRole?: "Spoiler" | "Duplicator";
  }): Promise<SessionPayload> {
    return request(`${this.base}/sessions`, {
      method: "POST",
      body: JSON.stringify(opts),
    });
  }

  getSession(id: string): Promise<SessionPayload> {
    return request(`${this.base}/sessions/${id}`);
  }

  spoilerMove(
    id: string,
    side: Side,
    selections: Record<string, Selection>,
  ): Promise<SessionPayload> {
    return request(`${this.base}/sessions/${id}/move`, {
      method: "POST",
      body: JSON.stringify({ side, selections }),
    });
  }

  duplicatorMove(
    id: string,
    replacements: Record<string, Selection[]>,
  ): Promise<SessionPayload> {
    return request(`${this.base}/sessions/${id}/move`, {
      method: "POST",
      body: JSON.stringify({ replacements }),
    });
  }

  hint(id: string): Promise<Hint> {
    return request(`${this.base}/sessions/${id}/hint`, { method: "POST" });
  }

  undo(id: string): Promise<SessionPayload> {
    return request(`${this.base}/sessions/${id}/undo`, { method: "POST" });
  }
}
