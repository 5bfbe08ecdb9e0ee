import { describe, expect, it } from "vitest";

import { cardHtml, galleryCards } from "../src/gallery.js";
import { turnFixture } from "./fixtures.js";

describe("gallery", () => {
  it("renders five cards for the five-proposal fixture, in API order", () => {
    const cards = galleryCards(turnFixture().proposals);
    expect(cards).toHaveLength(5);
    expect(cards.map((c) => c.rank)).toEqual([1, 2, 3, 4, 5]);
    const distances = cards.map((c) => Number(c.distanceLabel));
    const sorted = [...distances].sort((a, b) => a - b);
    expect(distances).toEqual(sorted);
    expect(cards.map((c) => c.category)).toEqual([
      "snail",
      "mountain",
      "balloon",
      "window",
      "lightning",
    ]);
  });

  it("does not reorder whatever the API sent", () => {
    const shuffled = [...turnFixture().proposals].reverse();
    const cards = galleryCards(shuffled);
    expect(cards.map((c) => c.category)).toEqual([
      "lightning",
      "window",
      "balloon",
      "mountain",
      "snail",
    ]);
  });

  it("card html carries rank, category and distance", () => {
    const [card] = galleryCards(turnFixture().proposals);
    const html = cardHtml(card);
    expect(html).toContain('data-rank="1"');
    expect(html).toContain("snail");
    expect(html).toContain("0.8936");
  });

  it("escapes category names in html", () => {
    const cards = galleryCards([
      { category: "<img>", cluster: 0, distance: 1, exemplar_id: 1 },
    ]);
    expect(cardHtml(cards[0])).not.toContain("<img>");
  });
});
