// View state: a pure mirror of the last server response plus UI cursor
// data (selection, target, trail, playback). No client-side rate
// arithmetic anywhere: reducers only copy server fields.

import type { GraphPayload, StatePayload, SynthesisPayload, Target } from "./types.js";

export interface ViewState {
  server: StatePayload | null;
  graph: GraphPayload | null;
  selected: number | null;          // selected arbitrage button
  target: Target;
  trail: number[];                  // visited vertices, trail[last] is current
  chain: number[] | null;           // armed playback chain
  cursor: number;
  chainLabel: string;
  notice: string;
  connected: boolean;
}

export function initialViewState(): ViewState {
  return {
    server: null,
    graph: null,
    selected: null,
    target: [0, 0, 0],
    trail: [],
    chain: null,
    cursor: 0,
    chainLabel: "",
    notice: "",
    connected: false,
  };
}

function withServer(view: ViewState, payload: StatePayload): ViewState {
  return { ...view, server: payload, connected: true };
}

/** Fresh state fetch or reset: restart the trail at the current vertex. */
export function onState(view: ViewState, payload: StatePayload): ViewState {
  const trail = payload.vertex === null ? [] : [payload.vertex];
  return { ...withServer(view, payload), trail };
}

export function onReset(view: ViewState, payload: StatePayload): ViewState {
  return {
    ...onState(view, payload),
    chain: null,
    cursor: 0,
    chainLabel: "",
    notice: "reset",
  };
}

/** An apply response extends the trail only when the move happened. */
export function onApplied(view: ViewState, payload: StatePayload): ViewState {
  const next = withServer(view, payload);
  if (!payload.applied) {
    return { ...next, notice: `arbitrage ${payload.arbitrage} is not active` };
  }
  const trail =
    payload.vertex === null ? view.trail : [...view.trail, payload.vertex];
  return { ...next, trail, notice: `applied arbitrage ${payload.arbitrage}` };
}

/** Undo rewinds the trail instead of appending, so it stays a walk. */
export function onUndone(view: ViewState, payload: StatePayload): ViewState {
  const next = withServer(view, payload);
  if (!payload.undone) {
    return { ...next, notice: "nothing to undo" };
  }
  const trail = view.trail.length > 1 ? view.trail.slice(0, -1) : view.trail;
  return { ...next, trail, cursor: payload.playback?.cursor ?? next.cursor, notice: "undone" };
}

export function onGraph(view: ViewState, payload: GraphPayload): ViewState {
  return { ...view, graph: payload };
}

export function onSynthesized(
  view: ViewState,
  result: SynthesisPayload,
  label: string,
): ViewState {
  return {
    ...view,
    chain: result.chain,
    cursor: 0,
    chainLabel: label,
    notice:
      `chain of length ${result.length} (bound ${result.bound}, ${result.method}` +
      (result.deviation ? ", closed form missed; search chain used)" : ")"),
  };
}

/** Seek response after stepping through an armed chain. */
export function onPlayback(view: ViewState, payload: StatePayload, prevCursor: number): ViewState {
  const next = withServer(view, payload);
  const cursor = payload.cursor ?? prevCursor;
  let trail = view.trail;
  if (payload.vertex !== null) {
    if (cursor > prevCursor) {
      trail = [...view.trail];
      // one entry per actually-applied step is not observable from a single
      // seek response; extend with the landing vertex only when it moved
      if (trail[trail.length - 1] !== payload.vertex) trail = [...trail, payload.vertex];
    } else if (cursor < prevCursor) {
      trail = view.trail.length > 1 ? view.trail.slice(0, -1) : view.trail;
      if (trail[trail.length - 1] !== payload.vertex) trail = [...trail, payload.vertex];
    }
  }
  return { ...next, trail, cursor };
}

export function selectArbitrage(view: ViewState, k: number | null): ViewState {
  return { ...view, selected: k };
}

export function setTarget(view: ViewState, target: Target): ViewState {
  return { ...view, target };
}

export function onDisconnected(view: ViewState, message: string): ViewState {
  return { ...view, connected: false, notice: message };
}

/** Full loops completed for a periodic chain of the given block length. */
export function periodCounter(view: ViewState, blockLength = 24): number {
  return Math.floor(view.cursor / blockLength);
}

/** The active-button set must be exactly the server's flags. */
export function activeButtons(view: ViewState): Set<number> {
  const out = new Set<number>();
  view.server?.active.forEach((flag, idx) => {
    if (flag) out.add(idx + 1);
  });
  return out;
}

/** Check that the trail is a walk in the served graph (or a rewind of one). */
export function trailIsWalk(trail: number[], graph: GraphPayload): boolean {
  const edges = new Set(graph.edges.map((e) => `${e.source}->${e.target}`));
  for (let i = 1; i < trail.length; i += 1) {
    const a = trail[i - 1];
    const b = trail[i];
    if (a === undefined || b === undefined) return false;
    if (a === b) continue;
    if (!edges.has(`${a}->${b}`)) return false;
  }
  return true;
}
