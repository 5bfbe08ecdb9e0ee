// Turn API client with strict wire validation in both directions, so a
// drifting server and a drifting client both fail loudly in tests.

import type { TurnRequest, TurnResponse, WireStrokes } from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    public readonly status: number | null = null,
  ) {
    super(message);
  }
}

export function buildTurnRequest(
  strokes: WireStrokes,
  sessionId: string | null,
  n = 5,
  policy: "random" | "medoid" = "random",
): TurnRequest {
  const body: TurnRequest = { strokes, n, policy };
  if (sessionId !== null) body.session_id = sessionId;
  validateTurnRequest(body);
  return body;
}

export function validateTurnRequest(body: unknown): asserts body is TurnRequest {
  const b = expectObject(body, "request");
  if (b.session_id !== undefined && typeof b.session_id !== "string") {
    throw new ApiError("session_id must be a string");
  }
  if (b.n !== undefined && (!Number.isInteger(b.n) || (b.n as number) < 1)) {
    throw new ApiError("n must be a positive integer");
  }
  if (b.policy !== undefined && b.policy !== "random" && b.policy !== "medoid") {
    throw new ApiError("policy must be 'random' or 'medoid'");
  }
  validateStrokes(b.strokes);
}

export function validateStrokes(raw: unknown): asserts raw is WireStrokes {
  if (!Array.isArray(raw) || raw.length === 0) {
    throw new ApiError("strokes must be a non-empty array");
  }
  for (const stroke of raw) {
    if (!Array.isArray(stroke) || stroke.length === 0) {
      throw new ApiError("each stroke must be a non-empty array of points");
    }
    for (const point of stroke) {
      if (
        !Array.isArray(point) ||
        point.length !== 2 ||
        !Number.isInteger(point[0]) ||
        !Number.isInteger(point[1])
      ) {
        throw new ApiError("each point must be an integer [x, y] pair");
      }
    }
  }
}

export function validateTurnResponse(body: unknown): TurnResponse {
  const b = expectObject(body, "response");
  if (typeof b.session_id !== "string") throw new ApiError("missing session_id");
  if (!Number.isInteger(b.turn_index)) throw new ApiError("missing turn_index");

  const rec = expectObject(b.recognition, "recognition");
  if (typeof rec.category !== "string") throw new ApiError("recognition.category");
  if (!Number.isInteger(rec.cluster)) throw new ApiError("recognition.cluster");
  if (typeof rec.distance !== "number" || !Number.isFinite(rec.distance)) {
    throw new ApiError("recognition.distance");
  }

  if (!Array.isArray(b.proposals)) throw new ApiError("proposals must be an array");
  for (const raw of b.proposals) {
    const p = expectObject(raw, "proposal");
    if (typeof p.category !== "string") throw new ApiError("proposal.category");
    if (!Number.isInteger(p.cluster)) throw new ApiError("proposal.cluster");
    if (typeof p.distance !== "number" || !Number.isFinite(p.distance)) {
      throw new ApiError("proposal.distance");
    }
    if (!Number.isInteger(p.exemplar_id)) throw new ApiError("proposal.exemplar_id");
  }

  const sketch = expectObject(b.response, "response sketch");
  if (!Number.isInteger(sketch.id)) throw new ApiError("response.id");
  validateStrokes(sketch.strokes);
  return body as unknown as TurnResponse;
}

function expectObject(value: unknown, what: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new ApiError(`${what} must be an object`);
  }
  return value as Record<string, unknown>;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  async turn(request: TurnRequest): Promise<TurnResponse> {
    validateTurnRequest(request);
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}/api/turn`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(request),
      });
    } catch (err) {
      throw new ApiError(`network failure: ${String(err)}`);
    }
    const body = await parseJson(response);
    if (!response.ok) {
      const detail =
        typeof body === "object" && body !== null && "error" in body
          ? String((body as Record<string, unknown>).error)
          : `HTTP ${response.status}`;
      throw new ApiError(detail, response.status);
    }
    return validateTurnResponse(body);
  }

  async modelInfo(): Promise<Record<string, unknown>> {
    const response = await this.fetchFn(`${this.baseUrl}/api/model/info`);
    return (await parseJson(response)) as Record<string, unknown>;
  }
}

async function parseJson(response: Response): Promise<unknown> {
  try {
    return await response.json();
  } catch {
    throw new ApiError("response body is not JSON", response.status);
  }
}
