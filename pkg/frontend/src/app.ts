// Turn-loop controller. DOM access is behind a small view interface so
// the whole flow is drivable in tests with fakes; main.ts provides the
// real view.

import { ApiClient, ApiError, buildTurnRequest } from "./api.js";
import { galleryCards, type GalleryCard } from "./gallery.js";
import { replayStrokes, type Tick, frameTick } from "./replay.js";
import { StrokeRecorder } from "./strokes.js";
import type { DrawSurface } from "./surface.js";
import type { TurnResponse } from "./types.js";

export interface View {
  showBanner(message: string): void;
  clearBanner(): void;
  showRecognition(category: string, cluster: number, distance: number): void;
  showGallery(cards: GalleryCard[]): void;
  appendTimeline(turn: TurnResponse): void;
  setBusy(busy: boolean): void;
}

export class App {
  readonly recorder = new StrokeRecorder();
  sessionId: string | null = null;
  readonly timeline: TurnResponse[] = [];
  private busy = false;

  constructor(
    private readonly api: ApiClient,
    private readonly userSurface: DrawSurface,
    private readonly agentSurface: DrawSurface,
    private readonly view: View,
    private readonly tick: Tick = frameTick,
  ) {}

  get pending(): boolean {
    return this.busy;
  }

  /** Clears the drawing canvas only; turn history stays. */
  clearCanvas(): void {
    this.recorder.clear();
    this.userSurface.clear();
  }

  async submit(policy: "random" | "medoid" = "random"): Promise<TurnResponse | null> {
    if (this.busy) return null;
    if (this.recorder.strokes.length === 0) {
      this.view.showBanner("draw something first");
      return null;
    }
    this.busy = true;
    this.view.setBusy(true);
    this.view.clearBanner();
    try {
      const request = buildTurnRequest(this.recorder.toWire(), this.sessionId, 5, policy);
      const turn = await this.api.turn(request);
      this.sessionId = turn.session_id;
      this.timeline.push(turn);
      this.view.appendTimeline(turn);
      this.view.showRecognition(
        turn.recognition.category,
        turn.recognition.cluster,
        turn.recognition.distance,
      );
      this.view.showGallery(galleryCards(turn.proposals));
      this.agentSurface.clear();
      await replayStrokes(turn.response.strokes, this.agentSurface, this.tick);
      return turn;
    } catch (err) {
      // canvas content is untouched: only the failed request is dropped
      const message = err instanceof ApiError ? err.message : String(err);
      this.view.showBanner(message);
      return null;
    } finally {
      this.busy = false;
      this.view.setBusy(false);
    }
  }
}
