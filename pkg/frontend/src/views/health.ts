import { api } from "../api.js";
import { statusChart } from "../chart.js";
import { clear, el, errorBox, fmtPct, statusBadge } from "../dom.js";
import type { Navigate } from "../state.js";
import { GROUPS, STATUSES } from "../types.js";

export interface HealthViewState {
  experiment: string;
  status?: string;
  group?: string;
}

function stat(label: string, value: string, field: string): HTMLElement {
  return el(
    "div",
    { class: "stat", data: { field } },
    el("div", { class: "value", text: value }),
    el("div", { class: "label", text: label }),
  );
}

export async function renderHealth(
  root: HTMLElement,
  state: HealthViewState,
  navigate: Navigate,
): Promise<void> {
  clear(root);
  try {
    const [detail, instances] = await Promise.all([
      api.experiment(state.experiment),
      api.instances(state.experiment, { status: state.status, group: state.group }),
    ]);
    const { experiment, report, health, warnings } = detail;

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
        " / ",
        el("a", {
          text: experiment.benchmark_id,
          href: "#",
          onClick: (e) => {
            e.preventDefault();
            navigate({ view: "experiments", benchmark: experiment.benchmark_id });
          },
        }),
        ` / ${state.experiment}`,
      ),
      el("h1", { text: `Experiment ${state.experiment}` }),
      el("div", {
        class: "muted",
        text: `${experiment.agent_framework} / ${experiment.model_name}`,
      }),
    );

    // Experiment report: the performance numbers as served.
    root.append(
      el(
        "div",
        { class: "stats" },
        stat("resolved rate", fmtPct(report.resolved_rate), "resolved_rate"),
        stat("resolved", String(report.n_resolved), "n_resolved"),
        stat("instances", String(report.n_instances), "n_instances"),
        stat("empty patch", String(report.n_empty_patch), "n_empty_patch"),
        stat("bad patch", String(report.n_bad_patch), "n_bad_patch"),
        stat("eval error", String(report.n_eval_error), "n_eval_error"),
        stat("missing", String(report.n_missing), "n_missing"),
      ),
    );

    if (warnings.length > 0) {
      root.append(
        el(
          "details",
          { class: "panel" },
          el("summary", { text: `${warnings.length} ingest warnings` }),
          el("pre", { class: "block", text: warnings.join("\n") }),
        ),
      );
    }

    // Health chart; clicking a category applies that status filter.
    root.append(el("h2", { text: "Health breakdown" }));
    root.append(
      el(
        "div",
        { class: "panel" },
        statusChart(health.counts, (status) =>
          navigate({ view: "health", experiment: state.experiment, status }),
        ),
        el("div", {
          class: "muted",
          text: `${health.fixable_ids.length} setup-fixable instances (fix the environment and re-run)`,
          data: { field: "fixable_count" },
        }),
      ),
    );

    // Filterable instance table.
    const statusSelect = el("select") as HTMLSelectElement;
    statusSelect.append(el("option", { text: "all statuses", value: "" }));
    for (const status of STATUSES) {
      const option = el("option", { text: status, value: status });
      statusSelect.append(option);
    }
    statusSelect.value = state.status ?? "";
    const groupSelect = el("select") as HTMLSelectElement;
    groupSelect.append(el("option", { text: "all groups", value: "" }));
    for (const group of GROUPS) {
      groupSelect.append(el("option", { text: group, value: group }));
    }
    groupSelect.value = state.group ?? "";

    const apply = () =>
      navigate({
        view: "health",
        experiment: state.experiment,
        ...(statusSelect.value ? { status: statusSelect.value } : {}),
        ...(groupSelect.value ? { group: groupSelect.value } : {}),
      });
    statusSelect.addEventListener("change", apply);
    groupSelect.addEventListener("change", apply);

    root.append(el("h2", { text: "Instances" }));
    root.append(
      el(
        "div",
        { class: "filters" },
        el("span", { text: "filter:" }),
        statusSelect,
        groupSelect,
        el("span", { class: "muted", text: `${instances.total} shown`, data: { field: "total" } }),
      ),
    );

    const table = el("table", { class: "list", data: { role: "instances" } });
    table.append(
      el(
        "tr",
        {},
        el("th", { text: "instance" }),
        el("th", { text: "status" }),
        el("th", { text: "group" }),
        el("th", { text: "steps" }),
        el("th", { text: "patch" }),
      ),
    );
    for (const item of instances.items) {
      table.append(
        el(
          "tr",
          { data: { instance: item.instance_id } },
          el(
            "td",
            {},
            el("a", {
              text: item.instance_id,
              href: "#",
              onClick: (event) => {
                event.preventDefault();
                navigate({
                  view: "instance",
                  experiment: state.experiment,
                  instance: item.instance_id,
                  stepsPage: 1,
                });
              },
            }),
          ),
          el("td", {}, statusBadge(item.status)),
          el("td", { text: item.group }),
          el("td", { text: item.step_count === null ? "-" : String(item.step_count) }),
          el("td", { text: item.has_patch ? "yes" : "no" }),
        ),
      );
    }
    root.append(el("div", { class: "panel" }, table));
  } catch (err) {
    root.append(errorBox(err, () => void renderHealth(root, state, navigate)));
  }
}
