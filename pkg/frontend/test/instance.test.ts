import { describe, expect, it } from "vitest";

import type { ExperimentDetail, InstanceDetail, InstancesPage } from "../src/types.js";
import { fixture } from "./intercept.js";
import { mount } from "./util.js";

const instancesUrl = "/api/experiments/exp-001/instances?page_size=500";

function detailOf(instanceId: string): InstanceDetail {
  return fixture<InstanceDetail>(`/api/experiments/exp-001/instances/${instanceId}`);
}

function findInstance(predicate: (d: InstanceDetail) => boolean): InstanceDetail {
  const page = fixture<InstancesPage>(instancesUrl);
  for (const item of page.items) {
    const detail = detailOf(item.instance_id);
    if (predicate(detail)) return detail;
  }
  throw new Error("no fixture instance matches the predicate");
}

describe("instance view", () => {
  it("renders the seven-step fixture trajectory as seven cards in order", async () => {
    const detail = findInstance((d) => d.trajectory?.total_steps === 7);
    const { root } = await mount({
      view: "instance",
      experiment: "exp-001",
      instance: detail.instance_id,
      stepsPage: 1,
    });
    const cards = [...root.querySelectorAll("li.step")] as HTMLElement[];
    expect(cards).toHaveLength(7);
    expect(cards.map((c) => c.dataset.index)).toEqual(["0", "1", "2", "3", "4", "5", "6"]);
    const kinds = cards.map((c) => (c.querySelector(".badge.kind") as HTMLElement).dataset.kind);
    expect(kinds).toEqual(detail.trajectory!.steps.map((s) => s.kind));
    // the unknown upload kind arrives normalized to system
    expect(kinds).toContain("system");
  });

  it("shows a tool badge on tool_call steps", async () => {
    const detail = findInstance(
      (d) => d.trajectory !== null && d.trajectory.steps.some((s) => s.kind === "tool_call"),
    );
    const { root } = await mount({
      view: "instance",
      experiment: "exp-001",
      instance: detail.instance_id,
      stepsPage: 1,
    });
    const step = detail.trajectory!.steps.find((s) => s.kind === "tool_call")!;
    const badge = root.querySelector(`li.step[data-index="${step.index}"] .badge.tool`) as HTMLElement;
    expect(badge).not.toBeNull();
    expect(badge.textContent).toBe(step.tool_name);
  });

  it("renders the problem statement and the agent patch", async () => {
    const detail = findInstance((d) => d.patch !== null && d.patch !== "");
    const { root } = await mount({
      view: "instance",
      experiment: "exp-001",
      instance: detail.instance_id,
      stepsPage: 1,
    });
    expect(root.querySelector('[data-section="problem"]')?.textContent).toContain(
      detail.problem_statement,
    );
    const diff = root.querySelector('[data-section="patch"] pre.diff');
    expect(diff?.textContent).toContain("diff --git");
  });

  it("a missing instance shows explicit placeholders everywhere", async () => {
    const detail = findInstance((d) => d.status === "MISSING");
    const { root } = await mount({
      view: "instance",
      experiment: "exp-001",
      instance: detail.instance_id,
      stepsPage: 1,
    });
    for (const section of ["patch", "eval", "trajectory", "logs"]) {
      const panel = root.querySelector(`[data-section="${section}"]`) as HTMLElement;
      expect(panel.querySelector(".placeholder"), section).not.toBeNull();
    }
    expect(root.querySelectorAll("li.step")).toHaveLength(0);
  });
});
