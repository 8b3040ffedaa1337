"""ETL pipeline: poll an upload root, parse experiment directories, write
records to the store and large artifacts to the blob store.

Experiment identity is the directory-name slug; byte-identical re-uploads are
skipped by content hash, name collisions with different content get a -2/-3
suffix. Blobs are written before the records that reference them, and the
record write is a single transaction, so readers only ever observe an
experiment at ready or failed.
"""

from __future__ import annotations

import hashlib
import logging
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional, Sequence

from .analysis import classify_instance
from .errors import (
    ConflictingReport,
    MalformedManifest,
    MalformedReport,
    MalformedTrajectory,
    NoAdapterFound,
    RootUnreachable,
    UnknownBenchmark,
)
from .model import (
    BlobRef,
    Experiment,
    IngestState,
    InstanceRecord,
    TrajectoryStep,
    slugify,
)
from .parsers import (
    DEFAULT_ADAPTERS,
    ParseWarnings,
    ParserAdapter,
    detect_adapter,
    parse_eval_report,
    parse_manifest,
    parse_predictions,
)
from .rules import SignatureRule
from .store import Store

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
PREDICTIONS_NAME = "predictions.jsonl"
REPORT_NAME = "report.json"
LOGS_DIR = "logs"


def _file_tree(directory: Path) -> list[str]:
    """Relative POSIX paths of every file under the directory, sorted."""
    return sorted(
        p.relative_to(directory).as_posix()
        for p in directory.rglob("*")
        if p.is_file()
    )


def content_hash(directory: Path) -> str:
    """Deterministic digest of a directory tree: paths and file contents."""
    h = hashlib.sha256()
    for rel in _file_tree(directory):
        h.update(rel.encode("utf-8"))
        h.update(b"\x00")
        h.update(hashlib.sha256((directory / rel).read_bytes()).digest())
        h.update(b"\x00")
    return h.hexdigest()


def scan(root: Path, store: Store) -> list[Path]:
    """Experiment directories under the upload root not yet ingested.

    Idempotent by content hash; stable (name-sorted) order.
    """
    root = Path(root)
    if not root.is_dir():
        raise RootUnreachable(f"upload root {root} is not a readable directory")
    discovered = []
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if not entry.is_dir():
            continue
        if not store.has_content_hash(content_hash(entry)):
            discovered.append(entry)
    return discovered


def _fail(
    store: Store,
    directory: Path,
    digest: str,
    reason: str,
    warnings: ParseWarnings,
    benchmark_id: str = "",
    agent_framework: str = "",
    model_name: str = "",
    created_at: Optional[datetime] = None,
) -> Experiment:
    experiment = Experiment(
        experiment_id=store.allocate_experiment_id(slugify(directory.name)),
        benchmark_id=benchmark_id,
        agent_framework=agent_framework,
        model_name=model_name,
        created_at=created_at or datetime.now(timezone.utc),
        source_uri=str(directory),
        content_hash=digest,
        ingest_state=IngestState.FAILED,
    )
    store.insert_experiment(experiment, [], {}, warnings.messages, fail_reason=reason)
    logger.warning("ingest failed for %s: %s", directory, reason)
    return experiment


def ingest_experiment(
    store: Store,
    directory: Path,
    rules: Sequence[SignatureRule],
    adapters: Sequence[ParserAdapter] = DEFAULT_ADAPTERS,
) -> Optional[Experiment]:
    """Ingest one upload directory; returns None when already ingested.

    Only manifest and eval-report corruption (and an unknown benchmark) fail
    the experiment; malformed prediction lines and trajectories degrade to
    warnings because every analysis depends on the former, not the latter.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise RootUnreachable(f"{directory} is not a readable directory")
    digest = content_hash(directory)
    if store.has_content_hash(digest):
        return None

    warnings = ParseWarnings()
    tree = _file_tree(directory)

    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.is_file():
        return _fail(store, directory, digest, "manifest.json is missing", warnings)
    try:
        manifest = parse_manifest(manifest_path.read_bytes())
    except MalformedManifest as exc:
        return _fail(store, directory, digest, str(exc), warnings)

    if not store.has_benchmark(manifest.benchmark_id):
        return _fail(
            store, directory, digest,
            f"unknown benchmark {manifest.benchmark_id!r}",
            warnings,
            benchmark_id=manifest.benchmark_id,
            agent_framework=manifest.agent_framework,
            model_name=manifest.model_name,
            created_at=manifest.created_at,
        )
    benchmark = store.get_benchmark(manifest.benchmark_id)

    try:
        adapter = detect_adapter(tree, adapters, warnings)
    except NoAdapterFound as exc:
        return _fail(
            store, directory, digest, str(exc), warnings,
            benchmark_id=manifest.benchmark_id,
            agent_framework=manifest.agent_framework,
            model_name=manifest.model_name,
            created_at=manifest.created_at,
        )

    predictions_path = directory / PREDICTIONS_NAME
    predictions = {}
    if predictions_path.is_file():
        for record in parse_predictions(predictions_path.read_bytes(), warnings):
            predictions[record.instance_id] = record

    report_path = directory / REPORT_NAME
    eval_map = {}
    if report_path.is_file():
        try:
            eval_map = parse_eval_report(report_path.read_bytes())
        except (MalformedReport, ConflictingReport) as exc:
            return _fail(
                store, directory, digest, str(exc), warnings,
                benchmark_id=manifest.benchmark_id,
                agent_framework=manifest.agent_framework,
                model_name=manifest.model_name,
                created_at=manifest.created_at,
            )

    experiment_id = store.allocate_experiment_id(slugify(directory.name))
    records: list[InstanceRecord] = []
    inline_trajectories: dict[str, str] = {}

    for instance in benchmark.instances:
        iid = instance.instance_id
        prediction = predictions.get(iid)
        eval_outcome = eval_map.get(iid)

        steps: Optional[list[TrajectoryStep]] = None
        trajectory_ref: Optional[BlobRef] = None
        trajectory_inline: Optional[str] = None
        raw_trajectory = False
        traj_rel = adapter.trajectory_path(iid)
        traj_path = directory / traj_rel
        if traj_path.is_file():
            raw = traj_path.read_bytes()
            try:
                steps = adapter.parse_trajectory(raw)
            except MalformedTrajectory as exc:
                warnings.warn(f"{traj_rel}: {exc}; stored raw, no step count")
                trajectory_ref = store.blobs.put(raw, media_hint="raw")
                raw_trajectory = True
            else:
                trajectory_inline, trajectory_ref = store.store_trajectory(steps)

        logs: list[str] = []
        log_refs: list[BlobRef] = []
        log_path = directory / LOGS_DIR / f"{iid}.log"
        if log_path.is_file():
            raw_log = log_path.read_bytes()
            log_refs.append(store.blobs.put(raw_log, media_hint="log"))
            logs.append(raw_log.decode("utf-8", errors="replace"))

        status = classify_instance(
            prediction,
            steps,
            eval_outcome,
            logs,
            rules,
            artifacts_present=(
                prediction is not None
                or steps is not None
                or raw_trajectory
                or eval_outcome is not None
                or bool(logs)
            ),
        )
        record = InstanceRecord(
            experiment_id=experiment_id,
            instance_id=iid,
            patch=prediction.model_patch if prediction else None,
            trajectory_ref=trajectory_ref,
            log_refs=tuple(log_refs),
            eval=eval_outcome,
            status=status,
            step_count=len(steps) if steps is not None else None,
        )
        records.append(record)
        if trajectory_inline is not None:
            inline_trajectories[iid] = trajectory_inline

    experiment = Experiment(
        experiment_id=experiment_id,
        benchmark_id=manifest.benchmark_id,
        agent_framework=manifest.agent_framework,
        model_name=manifest.model_name,
        created_at=manifest.created_at,
        source_uri=str(directory),
        content_hash=digest,
        ingest_state=IngestState.READY,
    )
    store.insert_experiment(experiment, records, inline_trajectories, warnings.messages)
    logger.info("ingested %s as %s (%d instances, %d warnings)",
                directory, experiment_id, len(records), len(warnings.messages))
    return experiment


def run_poll_cycle(
    root: Path,
    store: Store,
    rules: Sequence[SignatureRule],
    adapters: Sequence[ParserAdapter] = DEFAULT_ADAPTERS,
) -> dict[str, Any]:
    """One scan-and-ingest pass; the unit the poller and the API trigger run."""
    discovered = scan(root, store)
    ingested, failed = [], []
    for directory in discovered:
        experiment = ingest_experiment(store, directory, rules, adapters)
        if experiment is None:
            continue
        if experiment.ingest_state is IngestState.READY:
            ingested.append(experiment.experiment_id)
        else:
            failed.append(experiment.experiment_id)
    return {
        "discovered": len(discovered),
        "ingested": ingested,
        "failed": failed,
    }


class Poller:
    """Pull-based polling background job; single writer, in-memory status."""

    def __init__(
        self,
        root: Path,
        store: Store,
        rules: Sequence[SignatureRule],
        interval_secs: float = 30.0,
    ) -> None:
        if interval_secs <= 0:
            raise ValueError("poll interval must be > 0")
        self.root = Path(root)
        self.store = store
        self.rules = list(rules)
        self.interval_secs = interval_secs
        self.last_poll: Optional[dict[str, Any]] = None
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None

    def poll_once(self) -> dict[str, Any]:
        at = datetime.now(timezone.utc).isoformat()
        try:
            result = run_poll_cycle(self.root, self.store, self.rules)
            status = {"at": at, "error": None, **result}
        except RootUnreachable as exc:
            # Retry next tick; surfaced via the health endpoint.
            status = {"at": at, "error": str(exc), "discovered": 0, "ingested": [], "failed": []}
            logger.warning("poll failed: %s", exc)
        self.last_poll = status
        return status

    def _run(self) -> None:
        while not self._stop.is_set():
            self.poll_once()
            self._stop.wait(self.interval_secs)

    def start(self) -> None:
        if self._thread is not None:
            return
        self._thread = threading.Thread(target=self._run, name="seaview-poller", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5.0)
            self._thread = None
