// The proposal gallery shows cards exactly in API order; the server
// already ranks by ascending distance and the UI must not reorder.

import type { ProposalInfo } from "./types.js";

export interface GalleryCard {
  rank: number;
  category: string;
  cluster: number;
  distanceLabel: string;
  exemplarId: number;
}

export function galleryCards(proposals: readonly ProposalInfo[]): GalleryCard[] {
  return proposals.map((p, i) => ({
    rank: i + 1,
    category: p.category,
    cluster: p.cluster,
    distanceLabel: p.distance.toFixed(4),
    exemplarId: p.exemplar_id,
  }));
}

export function cardHtml(card: GalleryCard): string {
  return (
    `<div class="card" data-rank="${card.rank}">` +
    `<span class="rank">${card.rank}</span>` +
    `<span class="cat">${escapeHtml(card.category)}</span>` +
    `<span class="cluster">cluster ${card.cluster}</span>` +
    `<span class="dist">d = ${card.distanceLabel}</span>` +
    `</div>`
  );
}

function escapeHtml(text: string): string {
  return text.replace(/[&<>"']/g, (ch) => `&#${ch.charCodeAt(0)};`);
}
