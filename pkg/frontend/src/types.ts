// Server payload shapes. The console never computes rates itself: every
// number here is carried verbatim from a server response.

export interface EnsembleDoc {
  mode: "numeric" | "lattice";
  log_rates: number[];
  base: number[];
  generators: { name: string; value: number }[];
  coeffs: number[][];
}

export interface StatePayload {
  log_rates: number[];
  discrepancies: number[];
  active: boolean[];
  balanced: boolean;
  history_len: number;
  rates: number[];
  mode: "numeric" | "lattice";
  vertex: number | null;
  exponents: number[][] | null;
  ensemble: EnsembleDoc;
  target: number[] | null;
  playback: { length: number; cursor: number; chain: number[] } | null;
  applied?: boolean;
  arbitrage?: number;
  undone?: boolean;
  cursor?: number;
}

export interface GraphVertex {
  id: number;
  name: string;
  values: number[];
  pairs: number[][];
  aliases: number[];
}

export interface GraphEdge {
  source: number;
  target: number;
  strong: number;
  arbitrage: number | null;
}

export interface GraphPayload {
  a: number;
  b: number;
  family: string;
  vertices: GraphVertex[];
  edges: GraphEdge[];
}

export interface SynthesisPayload {
  chain: number[];
  length: number;
  bound: number;
  method: string;
  deviation: boolean;
}

export type Target = [number, number, number];
