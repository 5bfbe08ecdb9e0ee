import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, buildTurnRequest, validateTurnRequest } from "../src/api.js";
import { StrokeRecorder } from "../src/strokes.js";
import { jsonResponse, turnFixture } from "./fixtures.js";

describe("wire request", () => {
  it("a drawn sketch serializes to a schema-valid /api/turn body", async () => {
    const rec = new StrokeRecorder();
    rec.pointerDown(10, 10);
    rec.pointerMove(200, 10);
    rec.pointerMove(200, 200);
    rec.pointerUp();
    rec.pointerDown(10, 10);
    rec.pointerMove(10, 200);
    rec.pointerUp();

    let captured: unknown = null;
    const client = new ApiClient("http://test", async (url, init) => {
      expect(url).toBe("http://test/api/turn");
      expect(init?.method).toBe("POST");
      captured = JSON.parse(String(init?.body));
      return jsonResponse(turnFixture());
    });

    await client.turn(buildTurnRequest(rec.toWire(), null));

    // the captured body must satisfy the documented request schema
    expect(() => validateTurnRequest(captured)).not.toThrow();
    const body = captured as Record<string, unknown>;
    expect(Object.keys(body).sort()).toEqual(["n", "policy", "strokes"]);
    expect(body.n).toBe(5);
    expect(body.policy).toBe("random");
    expect(body.strokes).toEqual([
      [
        [10, 10],
        [200, 10],
        [200, 200],
      ],
      [
        [10, 10],
        [10, 200],
      ],
    ]);
  });

  it("includes session_id on follow-up turns", async () => {
    let captured: Record<string, unknown> = {};
    const client = new ApiClient("http://test", async (_url, init) => {
      captured = JSON.parse(String(init?.body));
      return jsonResponse(turnFixture());
    });
    await client.turn(buildTurnRequest([[[0, 0], [5, 5]]], "b".repeat(32)));
    expect(captured.session_id).toBe("b".repeat(32));
  });

  it("refuses to build an empty-stroke request", () => {
    expect(() => buildTurnRequest([], null)).toThrow(ApiError);
  });
});

describe("response validation", () => {
  it("accepts the canned fixture", async () => {
    const client = new ApiClient("http://test", async () => jsonResponse(turnFixture()));
    const turn = await client.turn(buildTurnRequest([[[0, 0], [1, 1]]], null));
    expect(turn.proposals).toHaveLength(5);
  });

  it("rejects a body missing proposals", async () => {
    const broken = { ...turnFixture(), proposals: undefined };
    const client = new ApiClient("http://test", async () => jsonResponse(broken));
    await expect(client.turn(buildTurnRequest([[[0, 0], [1, 1]]], null))).rejects.toThrow(
      ApiError,
    );
  });

  it("surfaces the server's error message with the status", async () => {
    const client = new ApiClient("http://test", async () =>
      jsonResponse({ error: "model not loaded" }, 503),
    );
    try {
      await client.turn(buildTurnRequest([[[0, 0], [1, 1]]], null));
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
      expect((err as ApiError).message).toBe("model not loaded");
      expect((err as ApiError).status).toBe(503);
    }
  });
});
