import { api } from "../api.js";
import { diffView } from "../diff.js";
import { clear, el, errorBox, placeholder, statusBadge } from "../dom.js";
import type { Navigate } from "../state.js";
import type { CompareSide } from "../types.js";
import { stepCard } from "./instance.js";

export interface CompareViewState {
  baseline: string;
  target: string;
  instance?: string;
}

function bucket(
  name: string,
  ids: string[],
  key: string,
  onPick: (instanceId: string) => void,
): HTMLElement {
  const chips = el("div", { class: "chips" });
  for (const id of ids) {
    chips.append(el("span", { class: "chip", text: id, data: { instance: id }, onClick: () => onPick(id) }));
  }
  return el(
    "div",
    { class: "bucket", data: { bucket: key } },
    el("div", { class: "count", text: String(ids.length), data: { field: "count" } }),
    el("div", { class: "name", text: name }),
    ids.length === 0 ? el("div", {}, placeholder("none")) : chips,
  );
}

function sidePanel(label: string, side: CompareSide): HTMLElement {
  const panel = el(
    "div",
    { class: "panel", data: { side: label } },
    el("h2", {}, `${label}: ${side.experiment_id} `, statusBadge(side.status)),
    el("h2", { text: "Patch" }),
    diffView(side.patch),
    el("h2", { text: "Trajectory" }),
  );
  if (side.trajectory === null) {
    panel.append(placeholder("absent"));
  } else {
    const list = el("ol", { class: "steps" });
    for (const step of side.trajectory) list.append(stepCard(step));
    panel.append(list);
  }
  return panel;
}

export async function renderCompare(
  root: HTMLElement,
  state: CompareViewState,
  navigate: Navigate,
): Promise<void> {
  clear(root);
  try {
    const comparison = await api.compare(state.baseline, state.target);
    root.append(
      el("h1", { text: `Compare ${state.baseline} -> ${state.target}` }),
      el("div", {
        class: "muted",
        text: "gain = resolved only in target; regression = resolved only in baseline",
      }),
    );

    const pick = (instanceId: string) =>
      navigate({ ...state, view: "compare", instance: instanceId });
    root.append(
      el(
        "div",
        { class: "buckets" },
        bucket("gain", comparison.gain, "gain", pick),
        bucket("regression", comparison.regression, "regression", pick),
        bucket("both resolved", comparison.both_resolved, "both_resolved", pick),
        bucket("neither", comparison.neither, "neither", pick),
      ),
    );

    const transitions = Object.entries(comparison.transitions);
    if (transitions.length > 0) {
      const table = el("table", { class: "list" });
      table.append(
        el("tr", {}, el("th", { text: "baseline status" }), el("th", { text: "target status" }), el("th", { text: "instances" })),
      );
      for (const [key, count] of transitions) {
        const [from = "", to = ""] = key.split("->");
        table.append(
          el(
            "tr",
            { data: { transition: key } },
            el("td", {}, statusBadge(from)),
            el("td", {}, statusBadge(to)),
            el("td", { text: String(count) }),
          ),
        );
      }
      root.append(
        el("details", { class: "panel" }, el("summary", { text: "Status transitions" }), table),
      );
    }

    if (state.instance) {
      const detail = await api.compareInstance(state.baseline, state.target, state.instance);
      root.append(
        el("h2", { text: `Instance ${detail.instance_id}` }),
        el("div", { class: "panel" }, el("pre", { class: "block", text: detail.problem_statement })),
        el(
          "div",
          { class: "side-by-side" },
          sidePanel("baseline", detail.baseline),
          sidePanel("target", detail.target),
        ),
      );
    }
  } catch (err) {
    root.append(errorBox(err, () => void renderCompare(root, state, navigate)));
  }
}
