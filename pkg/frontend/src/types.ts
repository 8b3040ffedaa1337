// Response payload shapes served by the seaview API.

export const STATUSES = [
  "RESOLVED",
  "UNRESOLVED",
  "EMPTY_PATCH",
  "BAD_PATCH",
  "EVAL_ERROR",
  "ENV_FAILURE_LLM",
  "ENV_FAILURE_RUNTIME",
  "AGENT_LIMIT",
  "MISSING",
] as const;
export type Status = (typeof STATUSES)[number];

export const GROUPS = [
  "resolved",
  "unresolved",
  "setup_fixable",
  "report_flagged",
  "missing",
] as const;
export type Group = (typeof GROUPS)[number];

export interface BenchmarkSummary {
  benchmark_id: string;
  name: string;
  n_instances: number;
  n_experiments: number;
}

export interface ExperimentSummary {
  experiment_id: string;
  benchmark_id: string;
  agent_framework: string;
  model_name: string;
  created_at: string;
  source_uri: string;
  content_hash: string;
  ingest_state: string;
  resolved_rate: number | null;
}

export interface Report {
  experiment_id: string;
  n_instances: number;
  n_resolved: number;
  resolved_rate: number;
  n_empty_patch: number;
  n_bad_patch: number;
  n_eval_error: number;
  n_missing: number;
}

export interface Health {
  experiment_id: string;
  counts: Record<string, number>;
  fixable_ids: string[];
}

export interface ExperimentDetail {
  experiment: ExperimentSummary;
  report: Report;
  health: Health;
  warnings: string[];
}

export interface InstanceSummary {
  instance_id: string;
  status: Status;
  group: Group;
  step_count: number | null;
  has_patch: boolean;
  has_trajectory: boolean;
}

export interface InstancesPage {
  experiment_id: string;
  page: number;
  page_size: number;
  total: number;
  items: InstanceSummary[];
}

export interface Step {
  index: number;
  kind: string;
  content: string;
  tool_name: string | null;
  tool_args: unknown;
  timestamp: string | null;
}

export interface TrajectoryPage {
  steps: Step[];
  page: number;
  page_size: number;
  total_steps: number;
}

export interface BlobLink {
  digest: string;
  size: number;
  media_hint: string;
  url: string;
}

export interface EvalOutcome {
  resolved: boolean;
  patch_applied: boolean | null;
  harness_error: string | null;
}

export interface InstanceDetail {
  experiment_id: string;
  instance_id: string;
  status: Status;
  group: Group;
  problem_statement: string;
  gold_patch: string | null;
  patch: string | null;
  eval: EvalOutcome | null;
  step_count: number | null;
  trajectory: TrajectoryPage | null;
  trajectory_blob: BlobLink | null;
  log_refs: BlobLink[];
}

export interface Comparison {
  baseline_id: string;
  target_id: string;
  both_resolved: string[];
  gain: string[];
  regression: string[];
  neither: string[];
  transitions: Record<string, number>;
}

export interface CompareSide {
  experiment_id: string;
  status: Status;
  group: Group;
  patch: string | null;
  step_count: number | null;
  trajectory: Step[] | null;
}

export interface CompareInstanceDetail {
  instance_id: string;
  problem_statement: string;
  gold_patch: string | null;
  baseline: CompareSide;
  target: CompareSide;
}

export interface Summarization {
  experiment_ids: string[];
  union_resolved: string[];
  per_instance_counts: Record<string, number>;
  upper_bound_rate: number;
}
