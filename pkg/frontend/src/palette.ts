// Fixed stroke palette: stroke i is drawn with PALETTE[i % PALETTE.length]
// everywhere (live drawing, replay, static render), so snapshots are
// deterministic.

export const PALETTE: readonly string[] = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#17becf",
  "#e377c2",
  "#8c564b",
];

export function strokeColor(index: number): string {
  return PALETTE[index % PALETTE.length];
}
