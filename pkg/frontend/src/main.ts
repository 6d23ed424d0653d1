// Application loop: a single view state, a single in-flight mutation, and a
// full re-render after every response (the view is a pure render of server
// truth).

import { ApiClient } from "./api.js";
import {
  initialViewState,
  onApplied,
  onDisconnected,
  onGraph,
  onPlayback,
  onReset,
  onState,
  onSynthesized,
  onUndone,
  selectArbitrage,
  setTarget,
  type ViewState,
} from "./state.js";
import { renderDashboard, type Handlers } from "./ui.js";

const params = new URLSearchParams(window.location.search);
const api = new ApiClient(params.get("api") ?? "", params.get("session") ?? "console");

let view: ViewState = initialViewState();
let queue: Promise<void> = Promise.resolve();

const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");

function render(): void {
  renderDashboard(root as HTMLElement, view, handlers);
}

function enqueue(step: () => Promise<void>): void {
  queue = queue
    .then(step)
    .catch((err: unknown) => {
      view = onDisconnected(view, err instanceof Error ? err.message : String(err));
    })
    .then(render);
}

const handlers: Handlers = {
  onApply(k) {
    view = selectArbitrage(view, k);
    enqueue(async () => {
      view = onApplied(view, await api.apply(k));
    });
  },
  onUndo() {
    enqueue(async () => {
      view = onUndone(view, await api.undo());
    });
  },
  onReset(alpha, perturb) {
    enqueue(async () => {
      view = onReset(view, await api.reset({ alpha, perturb }));
      view = onGraph(view, await api.graph());
    });
  },
  onSetTarget(n1, n2, n3) {
    view = setTarget(view, [n1, n2, n3]);
    render();
  },
  onSynthesize(method) {
    enqueue(async () => {
      const result = await api.synthesize(view.target, method);
      view = onSynthesized(view, result, `chain to (${view.target.join(",")})`);
      view = onPlayback(view, await api.playbackLoad(result.chain), 0);
    });
  },
  onPlayStar() {
    enqueue(async () => {
      // reconstructed 24-periodic chain; served state verifies every step
      const star = [
        15, 10, 3, 21, 12, 8, 23, 18, 6, 9, 16, 13,
        11, 22, 2, 17, 24, 20, 5, 7, 4, 19, 1, 14,
      ];
      view = onSynthesized(
        view,
        { chain: star, length: 24, bound: 24, method: "periodic", deviation: false },
        "periodic chain",
      );
      view = onPlayback(view, await api.playbackLoad(star), 0);
    });
  },
  onStep(delta) {
    if (!view.chain) return;
    const prev = view.cursor;
    const next = Math.max(0, Math.min(view.chain.length, prev + delta));
    if (next === prev) return;
    enqueue(async () => {
      view = onPlayback(view, await api.playbackSeek(next), prev);
    });
  },
};

enqueue(async () => {
  view = onState(view, await api.state());
  view = onGraph(view, await api.graph());
});

window.setInterval(() => {
  if (!view.connected) {
    enqueue(async () => {
      view = onState(view, await api.state());
      view = onGraph(view, await api.graph());
    });
  }
}, 3000);
