// Stroke capture from pointer events. Coordinates are integer canvas
// pixels; consecutive duplicates are collapsed and anything shorter
// than 2 points after that (a click without a drag) is discarded.

export interface Point {
  x: number;
  y: number;
}

export class StrokeRecorder {
  strokes: Point[][] = [];
  private current: Point[] | null = null;

  get drawing(): boolean {
    return this.current !== null;
  }

  pointerDown(x: number, y: number): void {
    this.current = [{ x: Math.round(x), y: Math.round(y) }];
  }

  /** Extends the live stroke; returns the new segment for incremental
   * drawing, or null when no stroke is active. */
  pointerMove(x: number, y: number): [Point, Point] | null {
    if (!this.current) return null;
    const p = { x: Math.round(x), y: Math.round(y) };
    const prev = this.current[this.current.length - 1];
    this.current.push(p);
    return [prev, p];
  }

  /** Ends the stroke; returns the committed stroke or null if discarded. */
  pointerUp(): Point[] | null {
    if (!this.current) return null;
    const deduped = dedupConsecutive(this.current);
    this.current = null;
    if (deduped.length < 2) return null;
    this.strokes.push(deduped);
    return deduped;
  }

  /** Abandons an in-flight stroke (pointer left the canvas). */
  cancel(): void {
    this.current = null;
  }

  clear(): void {
    this.strokes = [];
    this.current = null;
  }

  toWire(): number[][][] {
    return this.strokes.map((stroke) => stroke.map((p) => [p.x, p.y]));
  }
}

export function dedupConsecutive(points: Point[]): Point[] {
  const out: Point[] = [];
  for (const p of points) {
    const last = out[out.length - 1];
    if (!last || last.x !== p.x || last.y !== p.y) {
      out.push(p);
    }
  }
  return out;
}
