import type { TurnResponse } from "../src/types.js";

/** A canned 200 body with five ascending-distance proposals. */
export function turnFixture(): TurnResponse {
  return {
    session_id: "a".repeat(32),
    turn_index: 0,
    recognition: { category: "star", cluster: 2, distance: 0.6131 },
    proposals: [
      { category: "snail", cluster: 0, distance: 0.8936, exemplar_id: 4000194 },
      { category: "mountain", cluster: 1, distance: 0.9589, exemplar_id: 3000095 },
      { category: "balloon", cluster: 2, distance: 1.0062, exemplar_id: 1000058 },
      { category: "window", cluster: 0, distance: 1.008, exemplar_id: 6000120 },
      { category: "lightning", cluster: 2, distance: 1.0754, exemplar_id: 2000083 },
    ],
    response: {
      id: 4000194,
      category: "snail",
      strokes: [
        [
          [128, 128],
          [180, 120],
          [200, 160],
        ],
        [
          [40, 40],
          [80, 40],
        ],
      ],
    },
  };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}
