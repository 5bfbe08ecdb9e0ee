// Stroke-by-stroke replay. The drawing is flattened to a sequence of
// draw ops; the animated path applies them one segment per tick and the
// static path applies them all at once, so the final animation frame is
// the static render by construction (and tests verify it on pixels).

import { strokeColor } from "./palette.js";
import type { DrawSurface } from "./surface.js";
import type { WireStrokes } from "./types.js";

export interface DrawOp {
  kind: "segment" | "point";
  stroke: number;
  color: string;
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export function drawOps(strokes: WireStrokes): DrawOp[] {
  const ops: DrawOp[] = [];
  strokes.forEach((points, index) => {
    const color = strokeColor(index);
    if (points.length === 1) {
      const [x, y] = points[0];
      ops.push({ kind: "point", stroke: index, color, x0: x, y0: y, x1: x, y1: y });
      return;
    }
    for (let i = 1; i < points.length; i++) {
      const [x0, y0] = points[i - 1];
      const [x1, y1] = points[i];
      ops.push({ kind: "segment", stroke: index, color, x0, y0, x1, y1 });
    }
  });
  return ops;
}

export function applyOp(surface: DrawSurface, op: DrawOp): void {
  if (op.kind === "point") {
    surface.drawPoint(op.x0, op.y0, op.color);
  } else {
    surface.drawSegment(op.x0, op.y0, op.x1, op.y1, op.color);
  }
}

/** Draw the whole sketch in one shot. */
export function renderStatic(strokes: WireStrokes, surface: DrawSurface): void {
  for (const op of drawOps(strokes)) {
    applyOp(surface, op);
  }
}

export type Tick = () => Promise<void>;

export const frameTick: Tick = () =>
  new Promise((resolve) => requestAnimationFrame(() => resolve()));

/** Animate the sketch one segment per tick at a fixed pace. Resolves
 * when the final frame (equal to the static render) is on the surface. */
export async function replayStrokes(
  strokes: WireStrokes,
  surface: DrawSurface,
  tick: Tick = frameTick,
): Promise<void> {
  for (const op of drawOps(strokes)) {
    applyOp(surface, op);
    await tick();
  }
}
