"""Structured store: benchmarks, experiments and instance records in SQLite,
large artifacts in the adjacent content-addressed blob store.

Layout under the store root::

    seaview.db    relational records
    blobs/        content-addressed blob files
    rules.toml    optional failure-signature rule table

Writers commit a whole experiment in one transaction, so readers never see a
partially ingested experiment. Every method opens a short-lived connection;
the store object is safe to share between threads.
"""

from __future__ import annotations

import json
import sqlite3
from pathlib import Path
from typing import Optional

from .blobstore import BlobStore
from .errors import (
    DuplicateBenchmark,
    StoreUnavailable,
    UnknownBenchmark,
    UnknownExperiment,
    UnknownInstance,
)
from .model import (
    DEFAULT_INLINE_THRESHOLD,
    Benchmark,
    BenchmarkInstance,
    BlobRef,
    EvalOutcome,
    Experiment,
    IngestState,
    InstanceRecord,
    InstanceStatus,
    TrajectoryStep,
    parse_timestamp,
)

_SCHEMA = """
CREATE TABLE IF NOT EXISTS benchmarks (
    benchmark_id TEXT PRIMARY KEY,
    name TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS benchmark_instances (
    benchmark_id TEXT NOT NULL REFERENCES benchmarks(benchmark_id),
    instance_id TEXT NOT NULL,
    repo TEXT NOT NULL,
    problem_statement TEXT NOT NULL,
    gold_patch TEXT,
    position INTEGER NOT NULL,
    PRIMARY KEY (benchmark_id, instance_id)
);
CREATE TABLE IF NOT EXISTS experiments (
    experiment_id TEXT PRIMARY KEY,
    benchmark_id TEXT NOT NULL,
    agent_framework TEXT NOT NULL,
    model_name TEXT NOT NULL,
    created_at TEXT NOT NULL,
    source_uri TEXT NOT NULL,
    content_hash TEXT NOT NULL UNIQUE,
    ingest_state TEXT NOT NULL,
    fail_reason TEXT,
    warnings TEXT NOT NULL DEFAULT '[]'
);
CREATE TABLE IF NOT EXISTS instance_records (
    experiment_id TEXT NOT NULL REFERENCES experiments(experiment_id),
    instance_id TEXT NOT NULL,
    patch TEXT,
    trajectory_inline TEXT,
    trajectory_ref TEXT,
    log_refs TEXT NOT NULL DEFAULT '[]',
    eval TEXT,
    status TEXT NOT NULL,
    step_count INTEGER,
    PRIMARY KEY (experiment_id, instance_id)
);
"""

DB_FILENAME = "seaview.db"
BLOBS_DIRNAME = "blobs"


def _record_to_row(record: InstanceRecord, trajectory_inline: Optional[str]) -> tuple:
    return (
        record.experiment_id,
        record.instance_id,
        record.patch,
        trajectory_inline,
        json.dumps(record.trajectory_ref.to_dict()) if record.trajectory_ref else None,
        json.dumps([r.to_dict() for r in record.log_refs]),
        json.dumps(record.eval.to_dict()) if record.eval else None,
        record.status.value,
        record.step_count,
    )


def _row_to_record(row: sqlite3.Row) -> InstanceRecord:
    return InstanceRecord(
        experiment_id=row["experiment_id"],
        instance_id=row["instance_id"],
        patch=row["patch"],
        trajectory_ref=BlobRef.from_dict(json.loads(row["trajectory_ref"])) if row["trajectory_ref"] else None,
        log_refs=tuple(BlobRef.from_dict(r) for r in json.loads(row["log_refs"])),
        eval=EvalOutcome.from_dict(json.loads(row["eval"])) if row["eval"] else None,
        status=InstanceStatus(row["status"]),
        step_count=row["step_count"],
    )


def _row_to_experiment(row: sqlite3.Row) -> Experiment:
    return Experiment(
        experiment_id=row["experiment_id"],
        benchmark_id=row["benchmark_id"],
        agent_framework=row["agent_framework"],
        model_name=row["model_name"],
        created_at=parse_timestamp(row["created_at"]),
        source_uri=row["source_uri"],
        content_hash=row["content_hash"],
        ingest_state=IngestState(row["ingest_state"]),
    )


class Store:
    def __init__(self, root: Path, inline_threshold: int = DEFAULT_INLINE_THRESHOLD) -> None:
        self.root = Path(root)
        self.inline_threshold = inline_threshold
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StoreUnavailable(f"cannot create store at {self.root}: {exc}")
        self.db_path = self.root / DB_FILENAME
        self.blobs = BlobStore(self.root / BLOBS_DIRNAME)
        with self._connect() as conn:
            conn.executescript(_SCHEMA)

    def _connect(self) -> sqlite3.Connection:
        try:
            conn = sqlite3.connect(self.db_path, timeout=30.0)
        except sqlite3.Error as exc:
            raise StoreUnavailable(f"cannot open store database: {exc}")
        conn.row_factory = sqlite3.Row
        return conn

    # -- benchmarks

    def put_benchmark(self, benchmark: Benchmark) -> None:
        with self._connect() as conn:
            existing = conn.execute(
                "SELECT benchmark_id FROM benchmarks WHERE benchmark_id = ?",
                (benchmark.benchmark_id,),
            ).fetchone()
            if existing:
                raise DuplicateBenchmark(f"benchmark {benchmark.benchmark_id!r} already exists")
            conn.execute(
                "INSERT INTO benchmarks (benchmark_id, name) VALUES (?, ?)",
                (benchmark.benchmark_id, benchmark.name),
            )
            conn.executemany(
                "INSERT INTO benchmark_instances "
                "(benchmark_id, instance_id, repo, problem_statement, gold_patch, position) "
                "VALUES (?, ?, ?, ?, ?, ?)",
                [
                    (benchmark.benchmark_id, inst.instance_id, inst.repo,
                     inst.problem_statement, inst.gold_patch, pos)
                    for pos, inst in enumerate(benchmark.instances)
                ],
            )

    def has_benchmark(self, benchmark_id: str) -> bool:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT 1 FROM benchmarks WHERE benchmark_id = ?", (benchmark_id,)
            ).fetchone()
        return row is not None

    def get_benchmark(self, benchmark_id: str) -> Benchmark:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT benchmark_id, name FROM benchmarks WHERE benchmark_id = ?",
                (benchmark_id,),
            ).fetchone()
            if row is None:
                raise UnknownBenchmark(f"no benchmark {benchmark_id!r}")
            instances = conn.execute(
                "SELECT instance_id, repo, problem_statement, gold_patch "
                "FROM benchmark_instances WHERE benchmark_id = ? ORDER BY position",
                (benchmark_id,),
            ).fetchall()
        return Benchmark(
            benchmark_id=row["benchmark_id"],
            name=row["name"],
            instances=tuple(
                BenchmarkInstance(
                    instance_id=i["instance_id"],
                    repo=i["repo"],
                    problem_statement=i["problem_statement"],
                    gold_patch=i["gold_patch"],
                )
                for i in instances
            ),
        )

    def list_benchmarks(self) -> list[Benchmark]:
        with self._connect() as conn:
            rows = conn.execute("SELECT benchmark_id FROM benchmarks ORDER BY benchmark_id").fetchall()
        return [self.get_benchmark(r["benchmark_id"]) for r in rows]

    # -- experiments

    def has_content_hash(self, content_hash: str) -> bool:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT 1 FROM experiments WHERE content_hash = ?", (content_hash,)
            ).fetchone()
        return row is not None

    def allocate_experiment_id(self, slug: str) -> str:
        """Directory-name slug, with a -2/-3/... suffix when the name is taken."""
        with self._connect() as conn:
            taken = {
                r["experiment_id"]
                for r in conn.execute(
                    "SELECT experiment_id FROM experiments WHERE experiment_id = ? "
                    "OR experiment_id LIKE ?",
                    (slug, f"{slug}-%"),
                )
            }
        if slug not in taken:
            return slug
        n = 2
        while f"{slug}-{n}" in taken:
            n += 1
        return f"{slug}-{n}"

    def insert_experiment(
        self,
        experiment: Experiment,
        records: list[InstanceRecord] = (),
        inline_trajectories: Optional[dict[str, str]] = None,
        warnings: list[str] = (),
        fail_reason: Optional[str] = None,
    ) -> None:
        """Write one experiment and all its records atomically."""
        inline_trajectories = inline_trajectories or {}
        with self._connect() as conn:
            conn.execute(
                "INSERT INTO experiments (experiment_id, benchmark_id, agent_framework, "
                "model_name, created_at, source_uri, content_hash, ingest_state, "
                "fail_reason, warnings) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
                (
                    experiment.experiment_id,
                    experiment.benchmark_id,
                    experiment.agent_framework,
                    experiment.model_name,
                    experiment.created_at.isoformat(),
                    experiment.source_uri,
                    experiment.content_hash,
                    experiment.ingest_state.value,
                    fail_reason,
                    json.dumps(list(warnings)),
                ),
            )
            conn.executemany(
                "INSERT INTO instance_records (experiment_id, instance_id, patch, "
                "trajectory_inline, trajectory_ref, log_refs, eval, status, step_count) "
                "VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)",
                [
                    _record_to_row(r, inline_trajectories.get(r.instance_id))
                    for r in records
                ],
            )

    def get_experiment(self, experiment_id: str) -> Experiment:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT * FROM experiments WHERE experiment_id = ?", (experiment_id,)
            ).fetchone()
        if row is None:
            raise UnknownExperiment(f"no experiment {experiment_id!r}")
        return _row_to_experiment(row)

    def list_experiments(self, benchmark_id: Optional[str] = None) -> list[Experiment]:
        with self._connect() as conn:
            if benchmark_id is None:
                rows = conn.execute(
                    "SELECT * FROM experiments ORDER BY experiment_id"
                ).fetchall()
            else:
                rows = conn.execute(
                    "SELECT * FROM experiments WHERE benchmark_id = ? ORDER BY experiment_id",
                    (benchmark_id,),
                ).fetchall()
        return [_row_to_experiment(r) for r in rows]

    def experiment_warnings(self, experiment_id: str) -> list[str]:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT warnings FROM experiments WHERE experiment_id = ?",
                (experiment_id,),
            ).fetchone()
        if row is None:
            raise UnknownExperiment(f"no experiment {experiment_id!r}")
        return json.loads(row["warnings"])

    def experiment_fail_reason(self, experiment_id: str) -> Optional[str]:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT fail_reason FROM experiments WHERE experiment_id = ?",
                (experiment_id,),
            ).fetchone()
        if row is None:
            raise UnknownExperiment(f"no experiment {experiment_id!r}")
        return row["fail_reason"]

    # -- instance records

    def list_records(self, experiment_id: str) -> list[InstanceRecord]:
        self.get_experiment(experiment_id)  # 404 before returning an empty list
        with self._connect() as conn:
            rows = conn.execute(
                "SELECT * FROM instance_records WHERE experiment_id = ? ORDER BY instance_id",
                (experiment_id,),
            ).fetchall()
        return [_row_to_record(r) for r in rows]

    def get_record(self, experiment_id: str, instance_id: str) -> InstanceRecord:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT * FROM instance_records WHERE experiment_id = ? AND instance_id = ?",
                (experiment_id, instance_id),
            ).fetchone()
        if row is None:
            self.get_experiment(experiment_id)
            raise UnknownInstance(f"no instance {instance_id!r} in experiment {experiment_id!r}")
        return _row_to_record(row)

    def load_trajectory(self, experiment_id: str, instance_id: str) -> Optional[list[TrajectoryStep]]:
        """Normalized steps from the inline column or the blob store.

        None when the trajectory is absent or was stored as an unparseable
        raw blob (media_hint != trajectory).
        """
        with self._connect() as conn:
            row = conn.execute(
                "SELECT trajectory_inline, trajectory_ref FROM instance_records "
                "WHERE experiment_id = ? AND instance_id = ?",
                (experiment_id, instance_id),
            ).fetchone()
        if row is None:
            self.get_experiment(experiment_id)
            raise UnknownInstance(f"no instance {instance_id!r} in experiment {experiment_id!r}")
        if row["trajectory_inline"] is not None:
            steps = json.loads(row["trajectory_inline"])
            return [TrajectoryStep.from_dict(s) for s in steps]
        if row["trajectory_ref"] is not None:
            ref = BlobRef.from_dict(json.loads(row["trajectory_ref"]))
            if ref.media_hint != "trajectory":
                return None
            steps = json.loads(self.blobs.get(ref))
            return [TrajectoryStep.from_dict(s) for s in steps]
        return None

    def store_trajectory(self, steps: list[TrajectoryStep]) -> tuple[Optional[str], Optional[BlobRef]]:
        """Inline JSON below the threshold, blob above; returns (inline, ref)."""
        payload = json.dumps([s.to_dict() for s in steps])
        if len(payload.encode("utf-8")) <= self.inline_threshold:
            return payload, None
        ref = self.blobs.put(payload.encode("utf-8"), media_hint="trajectory")
        return None, ref
