// Fixed circular layout for the twelve-vertex orbit graph: vertex k sits at
// angle proportional to its canonical index, the balanced vertex in the
// middle. Pure geometry so trails are visually comparable across sessions.

export interface Point {
  x: number;
  y: number;
}

export function vertexPosition(vid: number, size: number): Point {
  const c = size / 2;
  if (vid === 0) {
    return { x: c, y: c };
  }
  const radius = c * 0.82;
  const angle = ((vid - 1) / 12) * 2 * Math.PI - Math.PI / 2;
  return { x: c + radius * Math.cos(angle), y: c + radius * Math.sin(angle) };
}

/** Deduplicate directed edges into undirected display segments. */
export function displaySegments(
  edges: { source: number; target: number }[],
): [number, number][] {
  const seen = new Set<string>();
  const out: [number, number][] = [];
  for (const e of edges) {
    const a = Math.min(e.source, e.target);
    const b = Math.max(e.source, e.target);
    const key = `${a}-${b}`;
    if (a === b || seen.has(key)) continue;
    seen.add(key);
    out.push([a, b]);
  }
  return out;
}
