"""Canonical domain types shared by every other module.

Pure data: frozen dataclasses and enums, no I/O. Each type has a documented
JSON object form (``to_dict``/``from_dict``) whose field names are the
snake_case field names; round-tripping through it is the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Optional

SLUG_RE = re.compile(r"^[a-z0-9._-]+$")

#: Inline-vs-blob size threshold for normalized trajectories, in bytes.
DEFAULT_INLINE_THRESHOLD = 16 * 1024


class InstanceStatus(str, Enum):
    """The single classified outcome of one instance in one experiment."""

    RESOLVED = "RESOLVED"
    UNRESOLVED = "UNRESOLVED"
    EMPTY_PATCH = "EMPTY_PATCH"
    BAD_PATCH = "BAD_PATCH"
    EVAL_ERROR = "EVAL_ERROR"
    ENV_FAILURE_LLM = "ENV_FAILURE_LLM"
    ENV_FAILURE_RUNTIME = "ENV_FAILURE_RUNTIME"
    AGENT_LIMIT = "AGENT_LIMIT"
    MISSING = "MISSING"


class StatusGroup(str, Enum):
    RESOLVED = "resolved"
    UNRESOLVED = "unresolved"
    SETUP_FIXABLE = "setup_fixable"
    REPORT_FLAGGED = "report_flagged"
    MISSING = "missing"


_STATUS_GROUPS = {
    InstanceStatus.RESOLVED: StatusGroup.RESOLVED,
    InstanceStatus.UNRESOLVED: StatusGroup.UNRESOLVED,
    InstanceStatus.EMPTY_PATCH: StatusGroup.REPORT_FLAGGED,
    InstanceStatus.BAD_PATCH: StatusGroup.REPORT_FLAGGED,
    InstanceStatus.EVAL_ERROR: StatusGroup.REPORT_FLAGGED,
    InstanceStatus.ENV_FAILURE_LLM: StatusGroup.SETUP_FIXABLE,
    InstanceStatus.ENV_FAILURE_RUNTIME: StatusGroup.SETUP_FIXABLE,
    InstanceStatus.AGENT_LIMIT: StatusGroup.SETUP_FIXABLE,
    InstanceStatus.MISSING: StatusGroup.MISSING,
}

#: Statuses whose failures stem from environment or agent configuration and
#: might succeed on re-run.
SETUP_FIXABLE_STATUSES = frozenset(
    s for s, g in _STATUS_GROUPS.items() if g is StatusGroup.SETUP_FIXABLE
)


def status_group(status: InstanceStatus) -> StatusGroup:
    """Total mapping from status to its group; groups partition the enum."""
    return _STATUS_GROUPS[status]


class StepKind(str, Enum):
    THOUGHT = "thought"
    TOOL_CALL = "tool_call"
    OBSERVATION = "observation"
    ERROR = "error"
    SYSTEM = "system"


class IngestState(str, Enum):
    DISCOVERED = "discovered"
    INGESTING = "ingesting"
    READY = "ready"
    FAILED = "failed"


def is_blank_patch(patch: Optional[str]) -> bool:
    """True when a patch is absent or whitespace-only (the EMPTY_PATCH test)."""
    return patch is None or patch.strip() == ""


def _isoformat(ts: datetime) -> str:
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.isoformat()


def parse_timestamp(raw: str) -> datetime:
    """Parse an ISO-8601 timestamp, tolerating a trailing Z; naive → UTC."""
    ts = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


@dataclass(frozen=True)
class BenchmarkInstance:
    """One task in a benchmark: a GitHub issue against a repository snapshot."""

    instance_id: str
    repo: str
    problem_statement: str
    gold_patch: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.instance_id:
            raise ValueError("instance_id must be non-empty")

    def to_dict(self) -> dict[str, Any]:
        return {
            "instance_id": self.instance_id,
            "repo": self.repo,
            "problem_statement": self.problem_statement,
            "gold_patch": self.gold_patch,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "BenchmarkInstance":
        return cls(
            instance_id=d["instance_id"],
            repo=d["repo"],
            problem_statement=d["problem_statement"],
            gold_patch=d.get("gold_patch"),
        )


@dataclass(frozen=True)
class Benchmark:
    """A named set of task instances."""

    benchmark_id: str
    name: str
    instances: tuple[BenchmarkInstance, ...] = ()

    def __post_init__(self) -> None:
        if not SLUG_RE.match(self.benchmark_id):
            raise ValueError(f"benchmark_id is not a slug: {self.benchmark_id!r}")
        ids = [i.instance_id for i in self.instances]
        if len(ids) != len(set(ids)):
            raise ValueError("instance ids must be unique within a benchmark")
        object.__setattr__(self, "instances", tuple(self.instances))

    @property
    def instance_ids(self) -> list[str]:
        return [i.instance_id for i in self.instances]

    def to_dict(self) -> dict[str, Any]:
        return {
            "benchmark_id": self.benchmark_id,
            "name": self.name,
            "instances": [i.to_dict() for i in self.instances],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Benchmark":
        return cls(
            benchmark_id=d["benchmark_id"],
            name=d["name"],
            instances=tuple(BenchmarkInstance.from_dict(i) for i in d["instances"]),
        )


@dataclass(frozen=True)
class TrajectoryStep:
    """One normalized step of an agent trajectory."""

    index: int
    kind: StepKind
    content: str
    tool_name: Optional[str] = None
    tool_args: Any = None
    timestamp: Optional[str] = None

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError("step index must be >= 0")
        if self.kind is StepKind.TOOL_CALL and not self.tool_name:
            raise ValueError("tool_call steps must carry tool_name")

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "kind": self.kind.value,
            "content": self.content,
            "tool_name": self.tool_name,
            "tool_args": self.tool_args,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TrajectoryStep":
        return cls(
            index=d["index"],
            kind=StepKind(d["kind"]),
            content=d["content"],
            tool_name=d.get("tool_name"),
            tool_args=d.get("tool_args"),
            timestamp=d.get("timestamp"),
        )


@dataclass(frozen=True)
class EvalOutcome:
    """What the evaluation harness said about one instance."""

    resolved: bool
    patch_applied: Optional[bool] = None
    harness_error: Optional[str] = None

    def __post_init__(self) -> None:
        if self.resolved and self.patch_applied is False:
            raise ValueError("resolved=true implies patch_applied absent or true")

    def to_dict(self) -> dict[str, Any]:
        return {
            "resolved": self.resolved,
            "patch_applied": self.patch_applied,
            "harness_error": self.harness_error,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "EvalOutcome":
        return cls(
            resolved=d["resolved"],
            patch_applied=d.get("patch_applied"),
            harness_error=d.get("harness_error"),
        )


@dataclass(frozen=True)
class BlobRef:
    """Content-addressed reference into the blob store."""

    digest: str
    size: int
    media_hint: str = "raw"  # trajectory | log | raw

    def to_dict(self) -> dict[str, Any]:
        return {"digest": self.digest, "size": self.size, "media_hint": self.media_hint}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "BlobRef":
        return cls(digest=d["digest"], size=d["size"], media_hint=d.get("media_hint", "raw"))


@dataclass(frozen=True)
class Experiment:
    """One agent run over a benchmark: provenance plus ingest state."""

    experiment_id: str
    benchmark_id: str
    agent_framework: str
    model_name: str
    created_at: datetime
    source_uri: str
    content_hash: str
    ingest_state: IngestState

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment_id": self.experiment_id,
            "benchmark_id": self.benchmark_id,
            "agent_framework": self.agent_framework,
            "model_name": self.model_name,
            "created_at": _isoformat(self.created_at),
            "source_uri": self.source_uri,
            "content_hash": self.content_hash,
            "ingest_state": self.ingest_state.value,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Experiment":
        return cls(
            experiment_id=d["experiment_id"],
            benchmark_id=d["benchmark_id"],
            agent_framework=d["agent_framework"],
            model_name=d["model_name"],
            created_at=parse_timestamp(d["created_at"]),
            source_uri=d["source_uri"],
            content_hash=d["content_hash"],
            ingest_state=IngestState(d["ingest_state"]),
        )


@dataclass(frozen=True)
class InstanceRecord:
    """Everything stored about one instance of one experiment.

    ``step_count`` is denormalized so list views never need blob fetches;
    it is absent when the trajectory is missing or could not be parsed.
    """

    experiment_id: str
    instance_id: str
    status: InstanceStatus
    patch: Optional[str] = None
    trajectory_ref: Optional[BlobRef] = None
    log_refs: tuple[BlobRef, ...] = ()
    eval: Optional[EvalOutcome] = None
    step_count: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "log_refs", tuple(self.log_refs))
        if self.step_count is not None and self.step_count < 0:
            raise ValueError("step_count must be >= 0")
        if self.status is InstanceStatus.EMPTY_PATCH and not is_blank_patch(self.patch):
            raise ValueError("EMPTY_PATCH status requires an absent or whitespace patch")
        if self.status is InstanceStatus.RESOLVED and not (self.eval and self.eval.resolved):
            raise ValueError("RESOLVED status requires eval.resolved=true")

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment_id": self.experiment_id,
            "instance_id": self.instance_id,
            "patch": self.patch,
            "trajectory_ref": self.trajectory_ref.to_dict() if self.trajectory_ref else None,
            "log_refs": [r.to_dict() for r in self.log_refs],
            "eval": self.eval.to_dict() if self.eval else None,
            "status": self.status.value,
            "step_count": self.step_count,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "InstanceRecord":
        return cls(
            experiment_id=d["experiment_id"],
            instance_id=d["instance_id"],
            patch=d.get("patch"),
            trajectory_ref=BlobRef.from_dict(d["trajectory_ref"]) if d.get("trajectory_ref") else None,
            log_refs=tuple(BlobRef.from_dict(r) for r in d.get("log_refs", [])),
            eval=EvalOutcome.from_dict(d["eval"]) if d.get("eval") else None,
            status=InstanceStatus(d["status"]),
            step_count=d.get("step_count"),
        )


def slugify(name: str) -> str:
    """Lowercase and replace anything outside [a-z0-9._-] with '-'."""
    slug = re.sub(r"[^a-z0-9._-]+", "-", name.lower()).strip("-")
    return slug or "experiment"
