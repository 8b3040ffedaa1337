import { api } from "../api.js";
import { clear, el, errorBox, fmtPct } from "../dom.js";
import type { Navigate } from "../state.js";

export async function renderExperiments(
  root: HTMLElement,
  benchmarkId: string,
  navigate: Navigate,
): Promise<void> {
  clear(root);
  try {
    const experiments = await api.experiments(benchmarkId);
    root.append(
      el(
        "div",
        { class: "crumbs" },
        el("a", {
          text: "benchmarks",
          href: "#/",
          onClick: (e) => {
            e.preventDefault();
            navigate({ view: "benchmarks" });
          },
        }),
        ` / ${benchmarkId}`,
      ),
      el("h1", { text: `Experiments on ${benchmarkId}` }),
    );
    if (experiments.length === 0) {
      root.append(el("div", { class: "panel empty-state", text: "No experiments uploaded yet." }));
      return;
    }

    const table = el("table", { class: "list" });
    table.append(
      el(
        "tr",
        {},
        el("th", { text: "experiment" }),
        el("th", { text: "framework" }),
        el("th", { text: "model" }),
        el("th", { text: "state" }),
        el("th", { text: "resolved" }),
      ),
    );
    for (const experiment of experiments) {
      table.append(
        el(
          "tr",
          { data: { experiment: experiment.experiment_id } },
          el(
            "td",
            {},
            el("a", {
              text: experiment.experiment_id,
              href: "#",
              onClick: (event) => {
                event.preventDefault();
                navigate({ view: "health", experiment: experiment.experiment_id });
              },
            }),
          ),
          el("td", { text: experiment.agent_framework, data: { field: "agent_framework" } }),
          el("td", { text: experiment.model_name, data: { field: "model_name" } }),
          el("td", { text: experiment.ingest_state }),
          el("td", { text: fmtPct(experiment.resolved_rate), data: { field: "resolved_rate" } }),
        ),
      );
    }
    root.append(el("div", { class: "panel" }, table));

    const ready = experiments.filter((e) => e.ingest_state === "ready");
    if (ready.length >= 2) {
      const baselineSelect = el("select") as HTMLSelectElement;
      const targetSelect = el("select") as HTMLSelectElement;
      for (const experiment of ready) {
        baselineSelect.append(el("option", { text: experiment.experiment_id, value: experiment.experiment_id }));
        targetSelect.append(el("option", { text: experiment.experiment_id, value: experiment.experiment_id }));
      }
      targetSelect.selectedIndex = 1;
      root.append(
        el(
          "div",
          { class: "panel filters" },
          el("span", { text: "Compare:" }),
          baselineSelect,
          el("span", { text: "vs" }),
          targetSelect,
          el("button", {
            text: "Compare",
            onClick: () =>
              navigate({ view: "compare", baseline: baselineSelect.value, target: targetSelect.value }),
          }),
          el("button", {
            text: "Summarize all",
            onClick: () =>
              navigate({
                view: "summarize",
                benchmark: benchmarkId,
                experiments: ready.map((e) => e.experiment_id),
              }),
          }),
        ),
      );
    }
  } catch (err) {
    root.append(errorBox(err, () => void renderExperiments(root, benchmarkId, navigate)));
  }
}
