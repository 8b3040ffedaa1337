import { describe, expect, it } from "vitest";

import { fmtPct } from "../src/dom.js";
import type { ExperimentDetail, InstancesPage } from "../src/types.js";
import { addOverride, fixture } from "./intercept.js";
import { field, mount, mountHash } from "./util.js";

const DETAIL_URL = "/api/experiments/exp-001";
const instancesUrl = (extra = "") => `/api/experiments/exp-001/instances?page_size=500${extra}`;

describe("health view", () => {
  it("renders the report numbers exactly as served", async () => {
    const detail = fixture<ExperimentDetail>(DETAIL_URL);
    const { root } = await mount({ view: "health", experiment: "exp-001" });
    expect(field(root, "resolved_rate")).toBe(fmtPct(detail.report.resolved_rate));
    expect(field(root, "n_resolved")).toBe(String(detail.report.n_resolved));
    expect(field(root, "n_instances")).toBe(String(detail.report.n_instances));
    expect(field(root, "n_empty_patch")).toBe(String(detail.report.n_empty_patch));
    expect(field(root, "n_bad_patch")).toBe(String(detail.report.n_bad_patch));
    expect(field(root, "n_eval_error")).toBe(String(detail.report.n_eval_error));
    expect(field(root, "n_missing")).toBe(String(detail.report.n_missing));
  });

  it("chart segments mirror the health counts", async () => {
    const detail = fixture<ExperimentDetail>(DETAIL_URL);
    const { root } = await mount({ view: "health", experiment: "exp-001" });
    const segments = [...root.querySelectorAll(".chart .segment[data-status]")] as HTMLElement[];
    const rendered = Object.fromEntries(
      segments.map((s) => [s.dataset.status, Number(s.dataset.count)]),
    );
    const nonzero = Object.fromEntries(
      Object.entries(detail.health.counts).filter(([, n]) => n > 0),
    );
    expect(rendered).toEqual(nonzero);
    expect(field(root, "fixable_count")).toContain(String(detail.health.fixable_ids.length));
  });

  it("clicking a category applies that status filter", async () => {
    const { root, navigations } = await mount({ view: "health", experiment: "exp-001" });
    const segment = root.querySelector(
      '.segment[data-status="ENV_FAILURE_LLM"]',
    ) as HTMLElement;
    segment.click();
    expect(navigations).toEqual([
      { view: "health", experiment: "exp-001", status: "ENV_FAILURE_LLM" },
    ]);
  });

  it("a status filter shows exactly the API's filtered ids", async () => {
    const filtered = fixture<InstancesPage>(instancesUrl("&status=ENV_FAILURE_LLM"));
    const { root } = await mount({
      view: "health",
      experiment: "exp-001",
      status: "ENV_FAILURE_LLM",
    });
    const shown = [...root.querySelectorAll("tr[data-instance]")].map(
      (r) => (r as HTMLElement).dataset.instance,
    );
    expect(shown).toEqual(filtered.items.map((i) => i.instance_id));
  });

  it("the setup_fixable group filter equals the health fixable id list", async () => {
    const detail = fixture<ExperimentDetail>(DETAIL_URL);
    const filtered = fixture<InstancesPage>(instancesUrl("&group=setup_fixable"));
    expect(filtered.items.map((i) => i.instance_id)).toEqual(detail.health.fixable_ids);
    const { root } = await mount({
      view: "health",
      experiment: "exp-001",
      group: "setup_fixable",
    });
    const shown = [...root.querySelectorAll("tr[data-instance]")].map(
      (r) => (r as HTMLElement).dataset.instance,
    );
    expect(shown).toEqual(detail.health.fixable_ids);
  });

  it("deep links reproduce the filtered view", async () => {
    const filtered = fixture<InstancesPage>(instancesUrl("&status=RESOLVED"));
    const { root } = await mountHash("#/experiments/exp-001?status=RESOLVED");
    const shown = [...root.querySelectorAll("tr[data-instance]")].map(
      (r) => (r as HTMLElement).dataset.instance,
    );
    expect(shown).toEqual(filtered.items.map((i) => i.instance_id));
  });

  it("an all-resolved experiment renders a single-segment chart", async () => {
    const detail = fixture<ExperimentDetail>(DETAIL_URL);
    const synthetic: ExperimentDetail = {
      ...detail,
      report: { ...detail.report, n_resolved: 12, resolved_rate: 1.0, n_empty_patch: 0, n_bad_patch: 0, n_eval_error: 0, n_missing: 0 },
      health: {
        experiment_id: "exp-solid",
        counts: { ...Object.fromEntries(Object.keys(detail.health.counts).map((k) => [k, 0])), RESOLVED: 12 },
        fixable_ids: [],
      },
    };
    addOverride("/api/experiments/exp-solid", synthetic);
    addOverride("/api/experiments/exp-solid/instances?page_size=500", {
      experiment_id: "exp-solid", page: 1, page_size: 500, total: 0, items: [],
    });
    const { root } = await mount({ view: "health", experiment: "exp-solid" });
    expect(root.querySelectorAll(".chart .segment[data-status]")).toHaveLength(1);
  });
});
