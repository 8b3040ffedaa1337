import { api } from "../api.js";
import { clear, el, errorBox, fmtPct } from "../dom.js";
import type { Navigate } from "../state.js";

export interface SummarizeViewState {
  benchmark: string;
  experiments: string[];
}

function stat(label: string, value: string, field: string): HTMLElement {
  return el(
    "div",
    { class: "stat", data: { field } },
    el("div", { class: "value", text: value }),
    el("div", { class: "label", text: label }),
  );
}

export async function renderSummarize(
  root: HTMLElement,
  state: SummarizeViewState,
  navigate: Navigate,
): Promise<void> {
  clear(root);
  try {
    // The picker only lists this benchmark's experiments, so a mixed-benchmark
    // selection cannot be expressed.
    const experiments = await api.experiments(state.benchmark);
    const ready = experiments.filter((e) => e.ingest_state === "ready");
    const selected = state.experiments.filter((eid) =>
      ready.some((e) => e.experiment_id === eid),
    );

    root.append(
      el(
        "div",
        { class: "crumbs" },
        el("a", {
          text: state.benchmark,
          href: "#",
          onClick: (e) => {
            e.preventDefault();
            navigate({ view: "experiments", benchmark: state.benchmark });
          },
        }),
        " / summarize",
      ),
      el("h1", { text: `Summarize experiments on ${state.benchmark}` }),
    );

    const picker = el("div", { class: "panel picker" });
    for (const experiment of ready) {
      const checked = selected.includes(experiment.experiment_id);
      const box = el("input", {
        type: "checkbox",
        checked,
        data: { experiment: experiment.experiment_id },
        onChange: () => {
          const next = checked
            ? selected.filter((eid) => eid !== experiment.experiment_id)
            : [...selected, experiment.experiment_id];
          navigate({ view: "summarize", benchmark: state.benchmark, experiments: next });
        },
      });
      picker.append(
        el(
          "label",
          {},
          box,
          ` ${experiment.experiment_id} `,
          el("span", { class: "muted", text: `${experiment.model_name}, ${fmtPct(experiment.resolved_rate)}` }),
        ),
      );
    }
    root.append(picker);

    if (selected.length === 0) {
      root.append(el("div", { class: "panel empty-state", text: "Select at least one experiment." }));
      return;
    }

    const summary = await api.summarize(selected);
    root.append(
      el(
        "div",
        { class: "stats" },
        stat("experiments", String(summary.experiment_ids.length), "n_experiments"),
        stat("union resolved", String(summary.union_resolved.length), "union_size"),
        stat("upper bound", fmtPct(summary.upper_bound_rate), "upper_bound_rate"),
      ),
    );

    const table = el("table", { class: "list", data: { role: "counts" } });
    table.append(
      el("tr", {}, el("th", { text: "instance" }), el("th", { text: "times resolved" }), el("th", { text: "" })),
    );
    const k = summary.experiment_ids.length;
    for (const [instanceId, count] of Object.entries(summary.per_instance_counts)) {
      const bar = el("div", { class: "chart" });
      if (count > 0) {
        const fill = el("div", { class: "segment seg-RESOLVED" });
        fill.style.width = `${(count / k) * 100}%`;
        bar.append(fill);
      }
      table.append(
        el(
          "tr",
          { data: { instance: instanceId, count: String(count) } },
          el("td", { text: instanceId }),
          el("td", { text: `${count} / ${k}` }),
          el("td", {}, bar),
        ),
      );
    }
    root.append(el("div", { class: "panel" }, table));
  } catch (err) {
    root.append(errorBox(err, () => void renderSummarize(root, state, navigate)));
  }
}
