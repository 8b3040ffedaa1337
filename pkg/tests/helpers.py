"""Store-construction helpers shared across test modules."""

from __future__ import annotations

from seaview.model import (
    Benchmark,
    BenchmarkInstance,
    EvalOutcome,
    Experiment,
    IngestState,
    InstanceRecord,
    InstanceStatus,
    parse_timestamp,
)
from seaview.store import Store


def make_record(eid: str, iid: str, status: InstanceStatus) -> InstanceRecord:
    """Smallest valid record carrying the given status."""
    if status is InstanceStatus.RESOLVED:
        return InstanceRecord(
            experiment_id=eid, instance_id=iid, status=status,
            patch="d", eval=EvalOutcome(resolved=True),
        )
    if status is InstanceStatus.EMPTY_PATCH:
        return InstanceRecord(experiment_id=eid, instance_id=iid, status=status, patch="")
    if status is InstanceStatus.MISSING:
        return InstanceRecord(experiment_id=eid, instance_id=iid, status=status)
    return InstanceRecord(experiment_id=eid, instance_id=iid, status=status, patch="d")


def put_experiment(store: Store, benchmark_id: str, eid: str,
                   statuses: dict[str, InstanceStatus]) -> None:
    experiment = Experiment(
        experiment_id=eid, benchmark_id=benchmark_id, agent_framework="f", model_name="m",
        created_at=parse_timestamp("2025-01-01T00:00:00Z"), source_uri="x",
        content_hash=f"hash-{eid}", ingest_state=IngestState.READY,
    )
    records = [make_record(eid, iid, status) for iid, status in statuses.items()]
    store.insert_experiment(experiment, records)


def put_benchmark(store: Store, benchmark_id: str, instance_ids: list[str]) -> None:
    store.put_benchmark(
        Benchmark(
            benchmark_id=benchmark_id, name=benchmark_id,
            instances=tuple(
                BenchmarkInstance(instance_id=i, repo="o/r", problem_statement="p")
                for i in instance_ids
            ),
        )
    )
