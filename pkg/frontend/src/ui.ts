// DOM rendering. Numbers from the server are rendered as-is (String(x) of
// the parsed JSON value); the view never recomputes them.

import { displaySegments, vertexPosition } from "./layout.js";
import { activeButtons, periodCounter, type ViewState } from "./state.js";

export const PAIR_NAMES = ["$/€", "$/£", "$/¥", "€/£", "€/¥", "£/¥"];

// trader / quoted / via triples in operator order
export const ARB_LABELS = [
  "$€£", "$€¥", "$£€", "$£¥", "$¥€", "$¥£",
  "€$£", "€$¥", "€£$", "€£¥", "€¥$", "€¥£",
  "£$€", "£$¥", "£€$", "£€¥", "£¥$", "£¥€",
  "¥$€", "¥$£", "¥€$", "¥€£", "¥£$", "¥£€",
];

const SVG_NS = "http://www.w3.org/2000/svg";
const GRAPH_SIZE = 340;

export interface Handlers {
  onApply: (k: number) => void;
  onUndo: () => void;
  onReset: (alpha: number, perturb: number) => void;
  onSetTarget: (n1: number, n2: number, n3: number) => void;
  onSynthesize: (method: "printed" | "bfs") => void;
  onPlayStar: () => void;
  onStep: (delta: number) => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function ratesTable(view: ViewState): HTMLElement {
  const box = el("div", "panel rates");
  box.appendChild(el("h2", undefined, "Principal rates"));
  const table = el("table");
  const head = el("tr");
  for (const h of ["pair", "rate", "log"]) head.appendChild(el("th", undefined, h));
  table.appendChild(head);
  const s = view.server;
  if (s) {
    PAIR_NAMES.forEach((name, i) => {
      const row = el("tr");
      row.appendChild(el("td", undefined, name));
      row.appendChild(el("td", "num", String(s.rates[i])));
      row.appendChild(el("td", "num", String(s.log_rates[i])));
      table.appendChild(row);
    });
  }
  box.appendChild(table);
  const d = el("div", "discrepancies");
  if (s) {
    d.appendChild(el("div", undefined, `discrepancies: (${s.discrepancies.map(String).join(", ")})`));
    d.appendChild(
      el("div", s.balanced ? "badge balanced" : "badge unbalanced",
         s.balanced ? "balanced" : "unbalanced"),
    );
    if (s.vertex !== null) d.appendChild(el("div", undefined, `vertex: D${s.vertex}`));
  }
  box.appendChild(d);
  return box;
}

function arbGrid(view: ViewState, handlers: Handlers): HTMLElement {
  const box = el("div", "panel arbs");
  box.appendChild(el("h2", undefined, "Arbitrages"));
  const active = activeButtons(view);
  const grid = el("div", "arb-grid");
  for (let k = 1; k <= 24; k += 1) {
    const button = el("button", "arb", `${k} ${ARB_LABELS[k - 1]}`);
    button.dataset.arb = String(k);
    if (active.has(k)) button.classList.add("active");
    if (view.selected === k) button.classList.add("selected");
    button.addEventListener("click", () => handlers.onApply(k));
    grid.appendChild(button);
  }
  box.appendChild(grid);
  return box;
}

function graphPanel(view: ViewState): HTMLElement {
  const box = el("div", "panel graph");
  box.appendChild(el("h2", undefined, "Discrepancy orbit"));
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${GRAPH_SIZE} ${GRAPH_SIZE}`);
  svg.setAttribute("width", String(GRAPH_SIZE));
  svg.setAttribute("height", String(GRAPH_SIZE));
  const graph = view.graph;
  if (graph) {
    for (const [a, b] of displaySegments(graph.edges)) {
      const pa = vertexPosition(a, GRAPH_SIZE);
      const pb = vertexPosition(b, GRAPH_SIZE);
      const lineEl = document.createElementNS(SVG_NS, "line");
      lineEl.setAttribute("x1", String(pa.x));
      lineEl.setAttribute("y1", String(pa.y));
      lineEl.setAttribute("x2", String(pb.x));
      lineEl.setAttribute("y2", String(pb.y));
      lineEl.setAttribute("class", "edge");
      svg.appendChild(lineEl);
    }
    if (view.trail.length > 1) {
      const poly = document.createElementNS(SVG_NS, "polyline");
      poly.setAttribute(
        "points",
        view.trail
          .map((v) => vertexPosition(v, GRAPH_SIZE))
          .map((p) => `${p.x},${p.y}`)
          .join(" "),
      );
      poly.setAttribute("class", "trail");
      svg.appendChild(poly);
    }
    const current = view.server?.vertex ?? null;
    const ids = [0, ...graph.vertices.map((v) => v.id)];
    for (const vid of ids) {
      const p = vertexPosition(vid, GRAPH_SIZE);
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", String(p.x));
      circle.setAttribute("cy", String(p.y));
      circle.setAttribute("r", vid === 0 ? "14" : "12");
      circle.setAttribute("class", vid === current ? "vertex current" : "vertex");
      svg.appendChild(circle);
      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(p.x));
      label.setAttribute("y", String(p.y + 4));
      label.setAttribute("class", "vertex-label");
      label.textContent = `D${vid}`;
      svg.appendChild(label);
    }
  }
  box.appendChild(svg);
  return box;
}

function controls(view: ViewState, handlers: Handlers): HTMLElement {
  const box = el("div", "panel controls");
  box.appendChild(el("h2", undefined, "Arbiter controls"));

  const resetRow = el("div", "row");
  const alpha = el("input") as HTMLInputElement;
  alpha.type = "number";
  alpha.step = "0.1";
  alpha.value = "2";
  alpha.id = "alpha";
  const perturb = el("input") as HTMLInputElement;
  perturb.type = "number";
  perturb.min = "1";
  perturb.max = "6";
  perturb.value = "1";
  perturb.id = "perturb";
  const resetBtn = el("button", "action", "reset");
  resetBtn.addEventListener("click", () =>
    handlers.onReset(Number(alpha.value), Number(perturb.value)),
  );
  resetRow.append("step ", alpha, " rate ", perturb, resetBtn);
  box.appendChild(resetRow);

  const targetRow = el("div", "row");
  const inputs = view.target.map((value, idx) => {
    const input = el("input") as HTMLInputElement;
    input.type = "number";
    input.value = String(value);
    input.id = `target-n${idx + 1}`;
    return input;
  });
  const setBtn = el("button", "action", "set target");
  setBtn.addEventListener("click", () =>
    handlers.onSetTarget(
      Number(inputs[0]!.value), Number(inputs[1]!.value), Number(inputs[2]!.value),
    ),
  );
  const synthPrinted = el("button", "action", "synthesize (closed form)");
  synthPrinted.addEventListener("click", () => handlers.onSynthesize("printed"));
  const synthBfs = el("button", "action", "synthesize (search)");
  synthBfs.addEventListener("click", () => handlers.onSynthesize("bfs"));
  targetRow.append("target ", inputs[0]!, inputs[1]!, inputs[2]!, setBtn, synthPrinted, synthBfs);
  box.appendChild(targetRow);

  const playRow = el("div", "row");
  const undoBtn = el("button", "action", "undo");
  undoBtn.addEventListener("click", handlers.onUndo);
  const starBtn = el("button", "action", "load periodic chain");
  starBtn.addEventListener("click", handlers.onPlayStar);
  const back = el("button", "action", "step back");
  back.addEventListener("click", () => handlers.onStep(-1));
  const fwd = el("button", "action", "step");
  fwd.addEventListener("click", () => handlers.onStep(1));
  playRow.append(undoBtn, starBtn, back, fwd);
  box.appendChild(playRow);

  const status = el("div", "status");
  if (view.chain) {
    status.appendChild(
      el("div", "chain",
         `${view.chainLabel}: [${view.chain.join(", ")}] cursor ${view.cursor}` +
         `/${view.chain.length}, periods ${periodCounter(view)}`),
    );
  }
  status.appendChild(el("div", "notice", view.notice));
  if (!view.connected) {
    status.appendChild(el("div", "banner", "server unreachable, reconnecting"));
  }
  box.appendChild(status);
  return box;
}

export function renderDashboard(root: HTMLElement, view: ViewState, handlers: Handlers): void {
  root.replaceChildren();
  const disabled = !view.connected;
  const layoutEl = el("div", "layout");
  layoutEl.appendChild(ratesTable(view));
  layoutEl.appendChild(arbGrid(view, handlers));
  layoutEl.appendChild(graphPanel(view));
  root.appendChild(layoutEl);
  root.appendChild(controls(view, handlers));
  if (disabled) {
    root.querySelectorAll("button").forEach((b) => {
      (b as HTMLButtonElement).disabled = true;
    });
  }
}
