"""The four analyses: health classification, report, comparison, summarization.

All operations are pure functions over a store snapshot and are safe to call
concurrently.

Classification precedence (the published table; total and deterministic):

1. MISSING when the instance has no artifacts at all (no prediction record,
   no trajectory file, no eval entry, no logs).
2. RESOLVED when the eval outcome says resolved.
3. The first matching signature rule's category (trajectory-scoped rules over
   error/system steps first, then log-scoped rules over logs; table order
   within each pass). Setup failures mask the unresolved verdict because
   those instances might succeed once the environment is fixed.
4. EMPTY_PATCH when the patch is absent or whitespace-only.
5. BAD_PATCH when the harness could not apply the patch.
6. EVAL_ERROR when the harness reported an error.
7. UNRESOLVED when an eval outcome exists.
8. EVAL_ERROR otherwise: a patch exists but was never evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional, Sequence

from .errors import (
    BadQuery,
    BenchmarkMismatch,
    EmptySelection,
    ExperimentNotReady,
    UnknownInstance,
)
from .model import (
    EvalOutcome,
    Experiment,
    IngestState,
    InstanceRecord,
    InstanceStatus,
    StatusGroup,
    TrajectoryStep,
    is_blank_patch,
    status_group,
)
from .parsers import PredictionRecord
from .rules import SignatureRule, match_rules
from .store import Store


def classify_instance(
    prediction: Optional[PredictionRecord],
    trajectory: Optional[Sequence[TrajectoryStep]],
    eval_outcome: Optional[EvalOutcome],
    logs: Optional[Sequence[str]],
    rules: Sequence[SignatureRule],
    *,
    artifacts_present: Optional[bool] = None,
) -> InstanceStatus:
    """Classify one instance; total over every input combination.

    ``artifacts_present`` lets the caller assert that artifacts exist even
    when none are usable here (e.g. a trajectory stored as an unparseable raw
    blob); by default it is derived from the arguments.
    """
    if artifacts_present is None:
        artifacts_present = (
            prediction is not None
            or trajectory is not None
            or eval_outcome is not None
            or bool(logs)
        )
    if not artifacts_present:
        return InstanceStatus.MISSING
    if eval_outcome is not None and eval_outcome.resolved:
        return InstanceStatus.RESOLVED
    hit = match_rules(rules, trajectory, logs)
    if hit is not None:
        return hit
    patch = prediction.model_patch if prediction is not None else None
    if is_blank_patch(patch):
        return InstanceStatus.EMPTY_PATCH
    if eval_outcome is not None and eval_outcome.patch_applied is False:
        return InstanceStatus.BAD_PATCH
    if eval_outcome is not None and eval_outcome.harness_error:
        return InstanceStatus.EVAL_ERROR
    if eval_outcome is not None:
        return InstanceStatus.UNRESOLVED
    return InstanceStatus.EVAL_ERROR


# --- result types -------------------------------------------------------------


@dataclass(frozen=True)
class HealthBreakdown:
    experiment_id: str
    counts: dict[InstanceStatus, int]
    fixable_ids: tuple[str, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment_id": self.experiment_id,
            "counts": {s.value: self.counts.get(s, 0) for s in InstanceStatus},
            "fixable_ids": list(self.fixable_ids),
        }


@dataclass(frozen=True)
class ExperimentReport:
    experiment_id: str
    n_instances: int
    n_resolved: int
    resolved_rate: float
    n_empty_patch: int
    n_bad_patch: int
    n_eval_error: int
    n_missing: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment_id": self.experiment_id,
            "n_instances": self.n_instances,
            "n_resolved": self.n_resolved,
            "resolved_rate": self.resolved_rate,
            "n_empty_patch": self.n_empty_patch,
            "n_bad_patch": self.n_bad_patch,
            "n_eval_error": self.n_eval_error,
            "n_missing": self.n_missing,
        }


@dataclass(frozen=True)
class ComparisonResult:
    baseline_id: str
    target_id: str
    both_resolved: frozenset[str]
    gain: frozenset[str]
    regression: frozenset[str]
    neither: frozenset[str]
    transitions: dict[tuple[InstanceStatus, InstanceStatus], int]

    def to_dict(self) -> dict[str, Any]:
        return {
            "baseline_id": self.baseline_id,
            "target_id": self.target_id,
            "both_resolved": sorted(self.both_resolved),
            "gain": sorted(self.gain),
            "regression": sorted(self.regression),
            "neither": sorted(self.neither),
            "transitions": {
                f"{a.value}->{b.value}": n
                for (a, b), n in sorted(
                    self.transitions.items(), key=lambda kv: (kv[0][0].value, kv[0][1].value)
                )
            },
        }


@dataclass(frozen=True)
class SummarizationResult:
    experiment_ids: tuple[str, ...]
    union_resolved: frozenset[str]
    per_instance_counts: dict[str, int]
    upper_bound_rate: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment_ids": list(self.experiment_ids),
            "union_resolved": sorted(self.union_resolved),
            "per_instance_counts": {k: self.per_instance_counts[k] for k in sorted(self.per_instance_counts)},
            "upper_bound_rate": self.upper_bound_rate,
        }


# --- helpers ------------------------------------------------------------------


def require_ready(store: Store, experiment_id: str) -> Experiment:
    experiment = store.get_experiment(experiment_id)
    if experiment.ingest_state is not IngestState.READY:
        raise ExperimentNotReady(
            f"experiment {experiment_id!r} is {experiment.ingest_state.value}, not ready"
        )
    return experiment


def _statuses(store: Store, experiment_id: str) -> dict[str, InstanceStatus]:
    return {r.instance_id: r.status for r in store.list_records(experiment_id)}


def resolved_set(store: Store, experiment_id: str) -> frozenset[str]:
    return frozenset(
        iid for iid, s in _statuses(store, experiment_id).items() if s is InstanceStatus.RESOLVED
    )


# --- the four analyses --------------------------------------------------------


def health_breakdown(store: Store, experiment_id: str) -> HealthBreakdown:
    require_ready(store, experiment_id)
    statuses = _statuses(store, experiment_id)
    counts: dict[InstanceStatus, int] = {}
    for s in statuses.values():
        counts[s] = counts.get(s, 0) + 1
    fixable = sorted(
        iid for iid, s in statuses.items() if status_group(s) is StatusGroup.SETUP_FIXABLE
    )
    return HealthBreakdown(experiment_id=experiment_id, counts=counts, fixable_ids=tuple(fixable))


def build_report(store: Store, experiment_id: str) -> ExperimentReport:
    require_ready(store, experiment_id)
    statuses = list(_statuses(store, experiment_id).values())
    n = len(statuses)
    n_resolved = sum(1 for s in statuses if s is InstanceStatus.RESOLVED)
    return ExperimentReport(
        experiment_id=experiment_id,
        n_instances=n,
        n_resolved=n_resolved,
        resolved_rate=n_resolved / n,
        n_empty_patch=sum(1 for s in statuses if s is InstanceStatus.EMPTY_PATCH),
        n_bad_patch=sum(1 for s in statuses if s is InstanceStatus.BAD_PATCH),
        n_eval_error=sum(1 for s in statuses if s is InstanceStatus.EVAL_ERROR),
        n_missing=sum(1 for s in statuses if s is InstanceStatus.MISSING),
    )


def _same_benchmark(store: Store, baseline_id: str, target_id: str) -> tuple[Experiment, Experiment]:
    baseline = require_ready(store, baseline_id)
    target = require_ready(store, target_id)
    if baseline.benchmark_id != target.benchmark_id:
        raise BenchmarkMismatch(
            f"experiments are on different benchmarks: "
            f"{baseline.benchmark_id!r} vs {target.benchmark_id!r}"
        )
    return baseline, target


def compare(store: Store, baseline_id: str, target_id: str) -> ComparisonResult:
    """Pairwise diff: gain/regression sets and the full status-transition matrix.

    Cross-benchmark comparison is rejected rather than intersected; a silent
    intersection would hide regressions.
    """
    baseline, _ = _same_benchmark(store, baseline_id, target_id)
    instance_ids = frozenset(store.get_benchmark(baseline.benchmark_id).instance_ids)
    base_statuses = _statuses(store, baseline_id)
    target_statuses = _statuses(store, target_id)
    base_resolved = frozenset(i for i in instance_ids if base_statuses[i] is InstanceStatus.RESOLVED)
    target_resolved = frozenset(i for i in instance_ids if target_statuses[i] is InstanceStatus.RESOLVED)
    transitions: dict[tuple[InstanceStatus, InstanceStatus], int] = {}
    for iid in instance_ids:
        key = (base_statuses[iid], target_statuses[iid])
        transitions[key] = transitions.get(key, 0) + 1
    return ComparisonResult(
        baseline_id=baseline_id,
        target_id=target_id,
        both_resolved=base_resolved & target_resolved,
        gain=target_resolved - base_resolved,
        regression=base_resolved - target_resolved,
        neither=instance_ids - base_resolved - target_resolved,
        transitions=transitions,
    )


def compare_instance(store: Store, baseline_id: str, target_id: str, instance_id: str) -> dict[str, Any]:
    """Side-by-side detail for one instance; absent artifacts are explicit nulls."""
    baseline, _ = _same_benchmark(store, baseline_id, target_id)
    benchmark = store.get_benchmark(baseline.benchmark_id)
    instance = next((i for i in benchmark.instances if i.instance_id == instance_id), None)
    if instance is None:
        raise UnknownInstance(
            f"no instance {instance_id!r} in benchmark {benchmark.benchmark_id!r}"
        )

    def side(experiment_id: str) -> dict[str, Any]:
        record = store.get_record(experiment_id, instance_id)
        steps = store.load_trajectory(experiment_id, instance_id)
        return {
            "experiment_id": experiment_id,
            "status": record.status.value,
            "group": status_group(record.status).value,
            "patch": record.patch,
            "step_count": record.step_count,
            "trajectory": [s.to_dict() for s in steps] if steps is not None else None,
        }

    return {
        "instance_id": instance_id,
        "problem_statement": instance.problem_statement,
        "gold_patch": instance.gold_patch,
        "baseline": side(baseline_id),
        "target": side(target_id),
    }


def summarize(store: Store, experiment_ids: Sequence[str]) -> SummarizationResult:
    """Union of resolved sets over a selection: the inference-scaling upper bound.

    Duplicate ids in the selection are ignored; the result is independent of
    selection order.
    """
    unique_ids = sorted(set(experiment_ids))
    if not unique_ids:
        raise EmptySelection("summarize needs at least one experiment")
    experiments = [require_ready(store, eid) for eid in unique_ids]
    benchmark_ids = {e.benchmark_id for e in experiments}
    if len(benchmark_ids) > 1:
        raise BenchmarkMismatch(
            f"summarize needs experiments on one benchmark, got {sorted(benchmark_ids)}"
        )
    instance_ids = store.get_benchmark(experiments[0].benchmark_id).instance_ids
    counts = {iid: 0 for iid in instance_ids}
    for eid in unique_ids:
        for iid in resolved_set(store, eid):
            counts[iid] += 1
    union = frozenset(iid for iid, n in counts.items() if n >= 1)
    return SummarizationResult(
        experiment_ids=tuple(unique_ids),
        union_resolved=union,
        per_instance_counts=counts,
        upper_bound_rate=len(union) / len(instance_ids),
    )


# --- list-view support ----------------------------------------------------------


def instance_summary(record: InstanceRecord) -> dict[str, Any]:
    return {
        "instance_id": record.instance_id,
        "status": record.status.value,
        "group": status_group(record.status).value,
        "step_count": record.step_count,
        "has_patch": not is_blank_patch(record.patch),
        "has_trajectory": record.step_count is not None or record.trajectory_ref is not None,
    }


def instance_summaries(
    store: Store,
    experiment_id: str,
    status: Optional[str] = None,
    group: Optional[str] = None,
) -> list[dict[str, Any]]:
    """Filtered, instance_id-ordered summaries for list views."""
    require_ready(store, experiment_id)
    status_filter: Optional[InstanceStatus] = None
    group_filter: Optional[StatusGroup] = None
    if status is not None:
        try:
            status_filter = InstanceStatus(status)
        except ValueError:
            raise BadQuery(f"unknown status {status!r}")
    if group is not None:
        try:
            group_filter = StatusGroup(group)
        except ValueError:
            raise BadQuery(f"unknown group {group!r}")
    out = []
    for record in store.list_records(experiment_id):
        if status_filter is not None and record.status is not status_filter:
            continue
        if group_filter is not None and status_group(record.status) is not group_filter:
            continue
        out.append(instance_summary(record))
    return out


def experiment_summary(store: Store, experiment: Experiment) -> dict[str, Any]:
    """Experiment metadata plus resolved_rate (null unless ready)."""
    d = experiment.to_dict()
    if experiment.ingest_state is IngestState.READY:
        d["resolved_rate"] = build_report(store, experiment.experiment_id).resolved_rate
    else:
        d["resolved_rate"] = None
    return d
