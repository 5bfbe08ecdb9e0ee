import { describe, expect, it } from "vitest";

import { PALETTE, strokeColor } from "../src/palette.js";
import { drawOps, renderStatic, replayStrokes } from "../src/replay.js";
import { PixelSurface } from "../src/surface.js";

const THREE_STROKES = [
  [
    [10, 10],
    [120, 10],
    [120, 90],
  ],
  [
    [30, 200],
    [90, 150],
  ],
  [
    [200, 200],
    [220, 240],
    [180, 240],
    [200, 200],
  ],
];

describe("replay", () => {
  it("single-stroke sketch renders in exactly one color", () => {
    const surface = new PixelSurface();
    renderStatic([THREE_STROKES[0]], surface);
    expect(surface.litColors()).toEqual(new Set([PALETTE[0]]));
  });

  it("three strokes get three distinct palette colors", () => {
    const surface = new PixelSurface();
    renderStatic(THREE_STROKES, surface);
    expect(surface.litColors()).toEqual(new Set([PALETTE[0], PALETTE[1], PALETTE[2]]));
  });

  it("palette cycles for stroke nine and beyond", () => {
    expect(strokeColor(8)).toBe(PALETTE[0]);
    expect(strokeColor(13)).toBe(PALETTE[5]);
  });

  it("final animation frame equals the static render, pixel for pixel", async () => {
    const animated = new PixelSurface();
    let ticks = 0;
    await replayStrokes(THREE_STROKES, animated, async () => {
      ticks += 1;
    });
    const still = new PixelSurface();
    renderStatic(THREE_STROKES, still);
    expect(animated.snapshot()).toBe(still.snapshot());
    expect(ticks).toBe(drawOps(THREE_STROKES).length);
  });

  it("animation reveals segments incrementally", async () => {
    const surface = new PixelSurface();
    const litAfterEachTick: number[] = [];
    await replayStrokes(THREE_STROKES, surface, async () => {
      litAfterEachTick.push(surface.pixels.filter((p) => p !== null).length);
    });
    for (let i = 1; i < litAfterEachTick.length; i++) {
      expect(litAfterEachTick[i]).toBeGreaterThanOrEqual(litAfterEachTick[i - 1]);
    }
    expect(litAfterEachTick[0]).toBeGreaterThan(0);
  });

  it("single-point strokes light a pixel", () => {
    const surface = new PixelSurface();
    renderStatic([[[42, 43]]], surface);
    expect(surface.pixels[43 * surface.width + 42]).toBe(PALETTE[0]);
  });
});
