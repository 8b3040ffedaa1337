import { api } from "../api.js";
import { diffView } from "../diff.js";
import { clear, el, errorBox, fmtBytes, placeholder, statusBadge } from "../dom.js";
import type { Navigate } from "../state.js";
import type { Step } from "../types.js";

export interface InstanceViewState {
  experiment: string;
  instance: string;
  stepsPage: number;
}

export function stepCard(step: Step): HTMLElement {
  const head = el(
    "div",
    { class: "head" },
    el("span", { text: `#${step.index}` }),
    el("span", { class: "badge kind", text: step.kind, data: { kind: step.kind } }),
  );
  if (step.tool_name) {
    head.append(el("span", { class: "badge tool", text: step.tool_name, data: { tool: step.tool_name } }));
  }
  if (step.timestamp) {
    head.append(el("span", { class: "muted", text: step.timestamp }));
  }
  const card = el("li", { class: "step", data: { index: String(step.index) } }, head);
  card.append(el("pre", { text: step.content }));
  if (step.tool_args !== null && step.tool_args !== undefined) {
    card.append(el("pre", { class: "muted", text: JSON.stringify(step.tool_args) }));
  }
  return card;
}

export async function renderInstance(
  root: HTMLElement,
  state: InstanceViewState,
  navigate: Navigate,
): Promise<void> {
  clear(root);
  try {
    const detail = await api.instance(state.experiment, state.instance, state.stepsPage);
    root.append(
      el(
        "div",
        { class: "crumbs" },
        el("a", {
          text: state.experiment,
          href: "#",
          onClick: (e) => {
            e.preventDefault();
            navigate({ view: "health", experiment: state.experiment });
          },
        }),
        ` / ${state.instance}`,
      ),
      el("h1", {}, `Instance ${state.instance} `, statusBadge(detail.status)),
    );

    root.append(el("h2", { text: "Problem statement" }));
    root.append(
      el("div", { class: "panel", data: { section: "problem" } },
        detail.problem_statement
          ? el("pre", { class: "block", text: detail.problem_statement })
          : placeholder("absent")),
    );

    root.append(el("h2", { text: "Agent patch" }));
    root.append(el("div", { class: "panel", data: { section: "patch" } }, diffView(detail.patch)));

    if (detail.gold_patch) {
      root.append(
        el(
          "details",
          { class: "panel", data: { section: "gold-patch" } },
          el("summary", { text: "Gold patch" }),
          diffView(detail.gold_patch),
        ),
      );
    }

    root.append(el("h2", { text: "Evaluation" }));
    const evalPanel = el("div", { class: "panel", data: { section: "eval" } });
    if (detail.eval === null) {
      evalPanel.append(placeholder("absent"));
    } else {
      evalPanel.append(
        el("div", { text: `resolved: ${detail.eval.resolved}` }),
        el("div", { text: `patch applied: ${detail.eval.patch_applied ?? "-"}` }),
        el("div", { text: `harness error: ${detail.eval.harness_error ?? "-"}` }),
      );
    }
    root.append(evalPanel);

    root.append(el("h2", { text: "Trajectory" }));
    const trajPanel = el("div", { class: "panel", data: { section: "trajectory" } });
    if (detail.trajectory === null) {
      trajPanel.append(placeholder("absent"));
      if (detail.trajectory_blob) {
        trajPanel.append(
          el("div", {}, el("a", {
            text: `raw trajectory blob (${fmtBytes(detail.trajectory_blob.size)})`,
            href: detail.trajectory_blob.url,
          })),
        );
      }
    } else {
      const { steps, page, page_size, total_steps } = detail.trajectory;
      const list = el("ol", { class: "steps" });
      for (const step of steps) list.append(stepCard(step));
      trajPanel.append(list);
      if (total_steps > page_size) {
        const lastPage = Math.ceil(total_steps / page_size);
        trajPanel.append(
          el(
            "div",
            { class: "pager" },
            el("button", {
              text: "prev",
              disabled: page <= 1,
              onClick: () => navigate({ ...state, view: "instance", stepsPage: page - 1 }),
            }),
            el("span", { text: `steps page ${page} / ${lastPage} (${total_steps} steps)` }),
            el("button", {
              text: "next",
              disabled: page >= lastPage,
              onClick: () => navigate({ ...state, view: "instance", stepsPage: page + 1 }),
            }),
          ),
        );
      }
    }
    root.append(trajPanel);

    root.append(el("h2", { text: "Logs" }));
    const logsPanel = el("div", { class: "panel", data: { section: "logs" } });
    if (detail.log_refs.length === 0) {
      logsPanel.append(placeholder("absent"));
    } else {
      for (const ref of detail.log_refs) {
        logsPanel.append(
          el("div", {}, el("a", { text: `log ${ref.digest.slice(0, 12)} (${fmtBytes(ref.size)})`, href: ref.url })),
        );
      }
    }
    root.append(logsPanel);
  } catch (err) {
    root.append(errorBox(err, () => void renderInstance(root, state, navigate)));
  }
}
