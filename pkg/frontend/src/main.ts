// Browser bootstrap: wires the canvases, pointer events, and buttons to
// the App controller.

import { ApiClient } from "./api.js";
import { App, type View } from "./app.js";
import { cardHtml, type GalleryCard } from "./gallery.js";
import { strokeColor } from "./palette.js";
import { CanvasSurface } from "./surface.js";
import type { TurnResponse } from "./types.js";

const API_BASE = (window as { SKETCHSHIFT_API?: string }).SKETCHSHIFT_API ?? "http://127.0.0.1:8075";
const CANVAS_SIZE = 384;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const userCanvas = el<HTMLCanvasElement>("user-canvas");
const agentCanvas = el<HTMLCanvasElement>("agent-canvas");
userCanvas.width = userCanvas.height = CANVAS_SIZE;
agentCanvas.width = agentCanvas.height = CANVAS_SIZE;

const userCtx = userCanvas.getContext("2d")!;
const userSurface = new CanvasSurface(userCtx, CANVAS_SIZE, CANVAS_SIZE);
const agentSurface = new CanvasSurface(agentCanvas.getContext("2d")!, CANVAS_SIZE);

const banner = el<HTMLDivElement>("banner");
const recognitionBadge = el<HTMLDivElement>("recognition");
const gallery = el<HTMLDivElement>("gallery");
const timelineList = el<HTMLUListElement>("timeline");
const submitButton = el<HTMLButtonElement>("submit");
const clearButton = el<HTMLButtonElement>("clear");

const view: View = {
  showBanner(message) {
    banner.textContent = message;
    banner.classList.remove("hidden");
  },
  clearBanner() {
    banner.classList.add("hidden");
  },
  showRecognition(category, cluster, distance) {
    recognitionBadge.textContent = `looks like ${category} (cluster ${cluster}) · d = ${distance.toFixed(4)}`;
    recognitionBadge.classList.remove("hidden");
  },
  showGallery(cards: GalleryCard[]) {
    gallery.innerHTML = cards.map(cardHtml).join("");
  },
  appendTimeline(turn: TurnResponse) {
    const item = document.createElement("li");
    const best = turn.proposals[0];
    item.textContent =
      `turn ${turn.turn_index}: ${turn.recognition.category} -> ` +
      `${best ? best.category : "?"} (#${turn.response.id})`;
    timelineList.appendChild(item);
  },
  setBusy(busy) {
    submitButton.disabled = busy;
  },
};

const app = new App(new ApiClient(API_BASE), userSurface, agentSurface, view);

banner.addEventListener("click", () => view.clearBanner());

function canvasPos(event: PointerEvent): [number, number] {
  const rect = userCanvas.getBoundingClientRect();
  return [event.clientX - rect.left, event.clientY - rect.top];
}

function redrawUser(): void {
  userSurface.clear();
  app.recorder.strokes.forEach((stroke, i) => {
    const color = strokeColor(i);
    for (let j = 1; j < stroke.length; j++) {
      userSurface.drawSegment(stroke[j - 1].x, stroke[j - 1].y, stroke[j].x, stroke[j].y, color);
    }
  });
}

userCanvas.addEventListener("pointerdown", (event) => {
  userCanvas.setPointerCapture(event.pointerId);
  app.recorder.pointerDown(...canvasPos(event));
});

userCanvas.addEventListener("pointermove", (event) => {
  if (!app.recorder.drawing) return;
  const [x, y] = canvasPos(event);
  const segment = app.recorder.pointerMove(x, y);
  if (segment) {
    const [a, b] = segment;
    userSurface.drawSegment(a.x, a.y, b.x, b.y, strokeColor(app.recorder.strokes.length));
  }
});

userCanvas.addEventListener("pointerup", () => {
  app.recorder.pointerUp();
  redrawUser(); // drops discarded clicks, settles colors
});

userCanvas.addEventListener("pointercancel", () => {
  app.recorder.cancel();
  redrawUser();
});

submitButton.addEventListener("click", () => {
  void app.submit();
});

clearButton.addEventListener("click", () => {
  app.clearCanvas();
  recognitionBadge.classList.add("hidden");
});
