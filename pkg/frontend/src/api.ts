/** Typed client for the scoring service. The UI never computes scores
 * itself; every number it shows comes out of one of these responses. */

export interface MatrixDoc {
  dim_from: string;
  dim_to: string;
  row_qas: string[];
  col_qas: string[];
  effects: number[][];
}

export interface AlternativeDoc {
  id: string;
  name: string;
  is_theoretical_optimal: boolean;
  resolved_matrices: MatrixDoc[];
}

export interface QualityAttributeDoc {
  id: string;
  name: string;
  dimension: string;
  importance: number;
  risk: number;
}

export interface ModelDoc {
  quality_attributes: QualityAttributeDoc[];
  alternatives: AlternativeDoc[];
}

export interface PairScoresDoc {
  dim_from: string;
  dim_to: string;
  raw: Record<string, number>;
  normalized_percent: Record<string, number>;
  theoretical_optimal: number;
}

export interface ScoresDoc {
  pairs: PairScoresDoc[];
}

export interface CellPatch {
  alternative: string;
  dim_from: string;
  dim_to: string;
  row: string;
  col: string;
  effect: number;
}

export interface CellDelta {
  pair: { dim_from: string; dim_to: string };
  alternative: string;
  old_raw: number;
  new_raw: number;
  delta_raw: number;
  old_pct: number | null;
  new_pct: number | null;
  delta_pct: number | null;
  pair_scores: {
    raw: Record<string, number>;
    normalized_percent: Record<string, number>;
  };
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail: unknown = null,
  ) {
    super(message);
  }
}

async function parseBody(response: Response): Promise<unknown> {
  const text = await response.text();
  if (!response.ok) {
    let code = "http_error";
    let message = `HTTP ${response.status}`;
    let detail: unknown = null;
    try {
      const body = JSON.parse(text) as { code?: string; message?: string; detail?: unknown };
      code = body.code ?? code;
      message = body.message ?? message;
      detail = body.detail ?? null;
    } catch {
      // non-JSON error body; keep the generic message
    }
    throw new ApiError(response.status, code, message, detail);
  }
  return JSON.parse(text);
}

export class Client {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    return parseBody(response);
  }

  async createSession(model: unknown, rawPriorities = false): Promise<string> {
    const body = await this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ model, raw_priorities: rawPriorities }),
    });
    return (body as { session_id: string }).session_id;
  }

  async getModel(sessionId: string, pending = false): Promise<ModelDoc> {
    return (await this.request(
      `/sessions/${sessionId}/model?pending=${pending}`,
    )) as ModelDoc;
  }

  async getScores(sessionId: string, pending = false): Promise<ScoresDoc> {
    return (await this.request(
      `/sessions/${sessionId}/scores?pending=${pending}`,
    )) as ScoresDoc;
  }

  async patchCell(sessionId: string, patch: CellPatch): Promise<CellDelta> {
    return (await this.request(`/sessions/${sessionId}/cells`, {
      method: "PATCH",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(patch),
    })) as CellDelta;
  }

  async commit(sessionId: string): Promise<void> {
    await this.request(`/sessions/${sessionId}/commit`, { method: "POST" });
  }

  async reset(sessionId: string): Promise<void> {
    await this.request(`/sessions/${sessionId}/reset`, { method: "POST" });
  }
}
