// Drawing goes through a tiny surface interface so replay logic can be
// tested pixel-for-pixel without a real canvas.

export interface DrawSurface {
  clear(): void;
  drawSegment(x0: number, y0: number, x1: number, y1: number, color: string): void;
  drawPoint(x: number, y: number, color: string): void;
}

/** Production surface over a 2D canvas context; sketch coordinates are
 * 0..255 and get scaled to the canvas size. */
export class CanvasSurface implements DrawSurface {
  private readonly scale: number;

  constructor(
    private readonly ctx: CanvasRenderingContext2D,
    private readonly size: number,
    coordSpace = 256,
  ) {
    this.scale = size / coordSpace;
    ctx.lineWidth = 2;
    ctx.lineCap = "round";
  }

  clear(): void {
    this.ctx.clearRect(0, 0, this.size, this.size);
  }

  drawSegment(x0: number, y0: number, x1: number, y1: number, color: string): void {
    this.ctx.strokeStyle = color;
    this.ctx.beginPath();
    this.ctx.moveTo(x0 * this.scale, y0 * this.scale);
    this.ctx.lineTo(x1 * this.scale, y1 * this.scale);
    this.ctx.stroke();
  }

  drawPoint(x: number, y: number, color: string): void {
    this.ctx.fillStyle = color;
    this.ctx.beginPath();
    this.ctx.arc(x * this.scale, y * this.scale, 2, 0, 2 * Math.PI);
    this.ctx.fill();
  }
}

/** Software surface: a width x height grid of color values. Segments
 * are walked with a simple integer line so two identical op sequences
 * produce bit-identical buffers. */
export class PixelSurface implements DrawSurface {
  readonly pixels: (string | null)[];

  constructor(
    readonly width = 256,
    readonly height = 256,
  ) {
    this.pixels = new Array(width * height).fill(null);
  }

  clear(): void {
    this.pixels.fill(null);
  }

  private set(x: number, y: number, color: string): void {
    if (x >= 0 && x < this.width && y >= 0 && y < this.height) {
      this.pixels[y * this.width + x] = color;
    }
  }

  drawPoint(x: number, y: number, color: string): void {
    this.set(Math.round(x), Math.round(y), color);
  }

  drawSegment(x0: number, y0: number, x1: number, y1: number, color: string): void {
    const steps = Math.max(Math.abs(x1 - x0), Math.abs(y1 - y0), 1);
    for (let i = 0; i <= steps; i++) {
      const t = i / steps;
      this.set(Math.round(x0 + (x1 - x0) * t), Math.round(y0 + (y1 - y0) * t), color);
    }
  }

  snapshot(): string {
    return this.pixels.map((c) => c ?? ".").join("|");
  }

  litColors(): Set<string> {
    const out = new Set<string>();
    for (const c of this.pixels) if (c !== null) out.add(c);
    return out;
  }
}
