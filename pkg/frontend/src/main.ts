// Hash router: the URL is the single source of view state, so every view is
// deep-linkable and reloads reproduce it.

import { decodeHash, encodeState, type Navigate, type ViewState } from "./state.js";
import { renderBenchmarks } from "./views/benchmarks.js";
import { renderCompare } from "./views/compare.js";
import { renderExperiments } from "./views/experiments.js";
import { renderHealth } from "./views/health.js";
import { renderInstance } from "./views/instance.js";
import { renderSummarize } from "./views/summarize.js";

export async function renderRoute(
  root: HTMLElement,
  state: ViewState,
  navigate: Navigate,
): Promise<void> {
  switch (state.view) {
    case "benchmarks":
      return renderBenchmarks(root, navigate);
    case "experiments":
      return renderExperiments(root, state.benchmark, navigate);
    case "health":
      return renderHealth(root, state, navigate);
    case "instance":
      return renderInstance(root, state, navigate);
    case "compare":
      return renderCompare(root, state, navigate);
    case "summarize":
      return renderSummarize(root, state, navigate);
  }
}

export function startApp(root: HTMLElement): void {
  const navigate: Navigate = (state) => {
    const hash = encodeState(state);
    if (location.hash === hash) {
      void renderRoute(root, state, navigate);
    } else {
      location.hash = hash; // hashchange triggers the render
    }
  };
  const rerender = () => void renderRoute(root, decodeHash(location.hash), navigate);
  window.addEventListener("hashchange", rerender);
  rerender();
}

const appRoot = typeof document !== "undefined" ? document.getElementById("app") : null;
if (appRoot) {
  startApp(appRoot);
}
