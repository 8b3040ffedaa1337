import { api } from "../api.js";
import { clear, el, errorBox } from "../dom.js";
import type { Navigate } from "../state.js";

export async function renderBenchmarks(root: HTMLElement, navigate: Navigate): Promise<void> {
  clear(root);
  try {
    const benchmarks = await api.benchmarks();
    root.append(el("h1", { text: "Benchmarks" }));
    if (benchmarks.length === 0) {
      root.append(
        el("div", {
          class: "panel empty-state",
          text: "No benchmarks yet. Register one with: seaview benchmark add <file>",
        }),
      );
      return;
    }
    const table = el("table", { class: "list" });
    table.append(
      el(
        "tr",
        {},
        el("th", { text: "benchmark" }),
        el("th", { text: "id" }),
        el("th", { text: "instances" }),
        el("th", { text: "experiments" }),
      ),
    );
    for (const benchmark of benchmarks) {
      table.append(
        el(
          "tr",
          { data: { benchmark: benchmark.benchmark_id } },
          el(
            "td",
            {},
            el("a", {
              text: benchmark.name,
              href: "#",
              onClick: (event) => {
                event.preventDefault();
                navigate({ view: "experiments", benchmark: benchmark.benchmark_id });
              },
            }),
          ),
          el("td", { text: benchmark.benchmark_id }),
          el("td", { text: String(benchmark.n_instances), data: { field: "n_instances" } }),
          el("td", { text: String(benchmark.n_experiments), data: { field: "n_experiments" } }),
        ),
      );
    }
    root.append(el("div", { class: "panel" }, table));
  } catch (err) {
    root.append(errorBox(err, () => void renderBenchmarks(root, navigate)));
  }
}
