// Wire types for the turn API. The UI treats every field as read-only:
// distances and orderings are displayed exactly as received.

export type WireStrokes = number[][][]; // strokes -> points -> [x, y]

export interface TurnRequest {
  session_id?: string;
  strokes: WireStrokes;
  n?: number;
  policy?: "random" | "medoid";
}

export interface RecognitionInfo {
  category: string;
  cluster: number;
  distance: number;
}

export interface ProposalInfo {
  category: string;
  cluster: number;
  distance: number;
  exemplar_id: number;
}

export interface SketchInfo {
  id: number;
  category: string | null;
  strokes: WireStrokes;
}

export interface TurnResponse {
  session_id: string;
  turn_index: number;
  recognition: RecognitionInfo;
  proposals: ProposalInfo[];
  response: SketchInfo;
}

export interface CategoryInfo {
  name: string;
  k: number;
  sketch_count: number;
}
