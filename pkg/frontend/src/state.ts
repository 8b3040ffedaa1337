// View state encoded in the URL hash: every view is deep-linkable and
// reloading a URL reproduces it. Filter values are validated against the
// status/group enums; anything invalid is dropped at decode time.

import { GROUPS, STATUSES } from "./types.js";

export type ViewState =
  | { view: "benchmarks" }
  | { view: "experiments"; benchmark: string }
  | { view: "health"; experiment: string; status?: string; group?: string }
  | { view: "instance"; experiment: string; instance: string; stepsPage: number }
  | { view: "compare"; baseline: string; target: string; instance?: string }
  | { view: "summarize"; benchmark: string; experiments: string[] };

export type Navigate = (state: ViewState) => void;

const HOME: ViewState = { view: "benchmarks" };

function validStatus(value: string | null): string | undefined {
  return value && (STATUSES as readonly string[]).includes(value) ? value : undefined;
}

function validGroup(value: string | null): string | undefined {
  return value && (GROUPS as readonly string[]).includes(value) ? value : undefined;
}

export function decodeHash(hash: string): ViewState {
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  const [pathPart = "", queryPart = ""] = raw.split("?", 2);
  const segments = pathPart.split("/").filter((s) => s !== "").map(decodeURIComponent);
  const query = new URLSearchParams(queryPart);

  if (segments.length === 0) return HOME;
  const [head, first, second, third] = segments;

  if (head === "benchmarks" && first) {
    return { view: "experiments", benchmark: first };
  }
  if (head === "experiments" && first && second === "instances" && third) {
    const page = Number(query.get("steps_page") ?? "1");
    return {
      view: "instance",
      experiment: first,
      instance: third,
      stepsPage: Number.isInteger(page) && page > 1 ? page : 1,
    };
  }
  if (head === "experiments" && first) {
    const state: ViewState = { view: "health", experiment: first };
    const status = validStatus(query.get("status"));
    const group = validGroup(query.get("group"));
    if (status) state.status = status;
    if (group) state.group = group;
    return state;
  }
  if (head === "compare") {
    const baseline = query.get("baseline");
    const target = query.get("target");
    if (baseline && target) {
      const state: ViewState = { view: "compare", baseline, target };
      const instance = query.get("instance");
      if (instance) state.instance = instance;
      return state;
    }
  }
  if (head === "summarize") {
    const benchmark = query.get("benchmark");
    if (benchmark) {
      const experiments = (query.get("experiments") ?? "")
        .split(",")
        .filter((e) => e !== "");
      return { view: "summarize", benchmark, experiments };
    }
  }
  return HOME;
}

export function encodeState(state: ViewState): string {
  switch (state.view) {
    case "benchmarks":
      return "#/";
    case "experiments":
      return `#/benchmarks/${encodeURIComponent(state.benchmark)}`;
    case "health": {
      const query = new URLSearchParams();
      if (state.status) query.set("status", state.status);
      if (state.group) query.set("group", state.group);
      const suffix = query.toString();
      return `#/experiments/${encodeURIComponent(state.experiment)}${suffix ? "?" + suffix : ""}`;
    }
    case "instance": {
      const base = `#/experiments/${encodeURIComponent(state.experiment)}/instances/${encodeURIComponent(state.instance)}`;
      return state.stepsPage > 1 ? `${base}?steps_page=${state.stepsPage}` : base;
    }
    case "compare": {
      const query = new URLSearchParams({ baseline: state.baseline, target: state.target });
      if (state.instance) query.set("instance", state.instance);
      return `#/compare?${query.toString()}`;
    }
    case "summarize": {
      const query = new URLSearchParams({ benchmark: state.benchmark });
      if (state.experiments.length > 0) query.set("experiments", state.experiments.join(","));
      return `#/summarize?${query.toString()}`;
    }
  }
}
