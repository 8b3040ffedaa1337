"""Parsers for raw experiment uploads.

Native upload layout (exact names)::

    manifest.json                 {"benchmark_id", "agent_framework", "model_name", ["created_at"]}
    predictions.jsonl             one object per line: {"instance_id", "model_patch"}
    trajs/<instance_id>.json      array of steps: {"kind", "content", ["tool_name"], ["tool_args"], ["timestamp"]}
    report.json                   {"resolved_ids", "unresolved_ids", "error_ids", "apply_failed_ids", "empty_patch_ids"}
    logs/<instance_id>.log        plain text, optional

A second "eventlog" dialect ships for fixture variety: trajectories live at
``trajectory/<instance_id>.jsonl`` with one event per line
(``{"event", "message", ["tool"], ["arguments"], ["ts"]}``).

Parsing is deterministic: same bytes, same values. Individual malformed
prediction lines and trajectory files degrade gracefully (skip + warn);
manifest and eval-report corruption is fatal to the experiment because every
analysis depends on them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Callable, Iterable, Optional

from .errors import (
    ConflictingReport,
    MalformedManifest,
    MalformedReport,
    MalformedTrajectory,
    NoAdapterFound,
)
from .model import EvalOutcome, StepKind, TrajectoryStep, parse_timestamp

HARNESS_ERROR_MESSAGE = "evaluation harness reported an error for this instance"

REPORT_LIST_KEYS = (
    "resolved_ids",
    "unresolved_ids",
    "error_ids",
    "apply_failed_ids",
    "empty_patch_ids",
)


@dataclass(frozen=True)
class ExperimentManifest:
    benchmark_id: str
    agent_framework: str
    model_name: str
    created_at: datetime

    def to_dict(self) -> dict[str, Any]:
        return {
            "benchmark_id": self.benchmark_id,
            "agent_framework": self.agent_framework,
            "model_name": self.model_name,
            "created_at": self.created_at.isoformat(),
        }


@dataclass(frozen=True)
class PredictionRecord:
    instance_id: str
    model_patch: str

    def __post_init__(self) -> None:
        if not self.instance_id:
            raise ValueError("instance_id must be non-empty")


@dataclass
class ParseWarnings:
    """Accumulates non-fatal parse problems for the ingest record."""

    messages: list[str] = field(default_factory=list)

    def warn(self, message: str) -> None:
        self.messages.append(message)


def parse_manifest(raw: bytes, *, default_created_at: Optional[datetime] = None) -> ExperimentManifest:
    """Parse manifest.json; created_at defaults to ingest time when absent."""
    try:
        data = json.loads(raw)
    except (ValueError, UnicodeDecodeError) as exc:
        raise MalformedManifest(f"manifest is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise MalformedManifest("manifest must be a JSON object")
    for key in ("benchmark_id", "agent_framework", "model_name"):
        if not isinstance(data.get(key), str) or not data[key]:
            raise MalformedManifest(f"manifest missing required field {key!r}")
    if "created_at" in data and data["created_at"] is not None:
        try:
            created_at = parse_timestamp(data["created_at"])
        except (TypeError, ValueError) as exc:
            raise MalformedManifest(f"manifest created_at is not a timestamp: {exc}")
    else:
        created_at = default_created_at or datetime.now(timezone.utc)
    return ExperimentManifest(
        benchmark_id=data["benchmark_id"],
        agent_framework=data["agent_framework"],
        model_name=data["model_name"],
        created_at=created_at,
    )


def parse_predictions(raw: bytes, warnings: Optional[ParseWarnings] = None) -> list[PredictionRecord]:
    """Parse predictions.jsonl, skipping malformed lines with a warning.

    Duplicate instance_ids resolve last-wins (append-style agent logs), with
    order preserved by first occurrence.
    """
    warnings = warnings if warnings is not None else ParseWarnings()
    by_id: dict[str, PredictionRecord] = {}
    for lineno, line in enumerate(raw.decode("utf-8", errors="replace").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except ValueError as exc:
            warnings.warn(f"predictions.jsonl line {lineno}: malformed JSON, skipped ({exc})")
            continue
        if not isinstance(data, dict) or not isinstance(data.get("instance_id"), str) or not data["instance_id"]:
            warnings.warn(f"predictions.jsonl line {lineno}: missing instance_id, skipped")
            continue
        patch = data.get("model_patch")
        if patch is None:
            patch = ""
        if not isinstance(patch, str):
            warnings.warn(f"predictions.jsonl line {lineno}: model_patch is not a string, skipped")
            continue
        record = PredictionRecord(instance_id=data["instance_id"], model_patch=patch)
        if record.instance_id in by_id:
            warnings.warn(
                f"predictions.jsonl line {lineno}: duplicate instance_id "
                f"{record.instance_id!r}, last occurrence wins"
            )
        by_id[record.instance_id] = record
    return list(by_id.values())


def parse_eval_report(raw: bytes) -> dict[str, EvalOutcome]:
    """Parse report.json into instance_id → EvalOutcome.

    Every id listed appears in the map exactly once; an id in two outcome
    lists rejects the whole report.
    """
    try:
        data = json.loads(raw)
    except (ValueError, UnicodeDecodeError) as exc:
        raise MalformedReport(f"report is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise MalformedReport("report must be a JSON object")
    lists: dict[str, list[str]] = {}
    for key in REPORT_LIST_KEYS:
        value = data.get(key, [])
        if not isinstance(value, list) or not all(isinstance(i, str) for i in value):
            raise MalformedReport(f"report field {key!r} must be an array of instance ids")
        lists[key] = value

    outcomes: dict[str, EvalOutcome] = {}
    seen_in: dict[str, str] = {}
    for key, ids in lists.items():
        for instance_id in ids:
            if instance_id in seen_in and seen_in[instance_id] != key:
                raise ConflictingReport(
                    f"instance {instance_id!r} appears in both "
                    f"{seen_in[instance_id]!r} and {key!r}"
                )
            seen_in[instance_id] = key
            if key == "resolved_ids":
                outcomes[instance_id] = EvalOutcome(resolved=True)
            elif key == "unresolved_ids":
                outcomes[instance_id] = EvalOutcome(resolved=False, patch_applied=True)
            elif key == "error_ids":
                outcomes[instance_id] = EvalOutcome(resolved=False, harness_error=HARNESS_ERROR_MESSAGE)
            elif key == "apply_failed_ids":
                outcomes[instance_id] = EvalOutcome(resolved=False, patch_applied=False)
            else:  # empty_patch_ids: nothing was evaluated
                outcomes[instance_id] = EvalOutcome(resolved=False)
    return outcomes


# --- trajectory adapters -----------------------------------------------------

_NATIVE_KINDS = {k.value for k in StepKind}

_EVENTLOG_KINDS = {
    "think": StepKind.THOUGHT,
    "act": StepKind.TOOL_CALL,
    "observe": StepKind.OBSERVATION,
    "error": StepKind.ERROR,
    "system": StepKind.SYSTEM,
}


def _normalize_step(index: int, kind_raw: str, content: str, tool_name: Any,
                    tool_args: Any, timestamp: Any, kind: Optional[StepKind]) -> TrajectoryStep:
    # Unknown kinds map to system with the original kind preserved in content.
    if kind is None:
        content = f"[{kind_raw}] {content}"
        kind = StepKind.SYSTEM
    if kind is StepKind.TOOL_CALL and not tool_name:
        raise MalformedTrajectory(f"step {index}: tool_call without tool_name")
    return TrajectoryStep(
        index=index,
        kind=kind,
        content=content,
        tool_name=tool_name if isinstance(tool_name, str) else None,
        tool_args=tool_args,
        timestamp=timestamp if isinstance(timestamp, str) else None,
    )


def _parse_native_trajectory(raw: bytes) -> list[TrajectoryStep]:
    try:
        data = json.loads(raw)
    except (ValueError, UnicodeDecodeError) as exc:
        raise MalformedTrajectory(f"trajectory is not valid JSON: {exc}")
    if not isinstance(data, list):
        raise MalformedTrajectory("trajectory must be a JSON array of steps")
    steps = []
    for index, item in enumerate(data):
        if not isinstance(item, dict) or not isinstance(item.get("kind"), str):
            raise MalformedTrajectory(f"step {index}: not an object with a 'kind'")
        kind_raw = item["kind"]
        kind = StepKind(kind_raw) if kind_raw in _NATIVE_KINDS else None
        content = item.get("content")
        if not isinstance(content, str):
            raise MalformedTrajectory(f"step {index}: missing 'content'")
        steps.append(
            _normalize_step(
                index, kind_raw, content,
                item.get("tool_name"), item.get("tool_args"), item.get("timestamp"), kind,
            )
        )
    return steps


def _parse_eventlog_trajectory(raw: bytes) -> list[TrajectoryStep]:
    steps = []
    index = 0
    for lineno, line in enumerate(raw.decode("utf-8", errors="replace").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            item = json.loads(line)
        except ValueError as exc:
            raise MalformedTrajectory(f"event line {lineno}: malformed JSON: {exc}")
        if not isinstance(item, dict) or not isinstance(item.get("event"), str):
            raise MalformedTrajectory(f"event line {lineno}: not an object with an 'event'")
        kind_raw = item["event"]
        message = item.get("message")
        if not isinstance(message, str):
            raise MalformedTrajectory(f"event line {lineno}: missing 'message'")
        steps.append(
            _normalize_step(
                index, kind_raw, message,
                item.get("tool"), item.get("arguments"), item.get("ts"),
                _EVENTLOG_KINDS.get(kind_raw),
            )
        )
        index += 1
    return steps


@dataclass(frozen=True)
class ParserAdapter:
    """A pluggable upload dialect: how to spot it and how to read trajectories."""

    adapter_id: str
    detect: Callable[[Iterable[str]], bool]
    parse_trajectory: Callable[[bytes], list[TrajectoryStep]]
    trajectory_path: Callable[[str], str]  # instance_id → relative file path


def _native_detect(paths: Iterable[str]) -> bool:
    paths = list(paths)
    if any(p.startswith("trajs/") and p.endswith(".json") for p in paths):
        return True
    # Manifest-only uploads (no trajectories anywhere) default to the native dialect.
    return "manifest.json" in paths and not _eventlog_detect(paths)


def _eventlog_detect(paths: Iterable[str]) -> bool:
    return any(p.startswith("trajectory/") and p.endswith(".jsonl") for p in paths)


NATIVE_ADAPTER = ParserAdapter(
    adapter_id="native",
    detect=_native_detect,
    parse_trajectory=_parse_native_trajectory,
    trajectory_path=lambda instance_id: f"trajs/{instance_id}.json",
)

EVENTLOG_ADAPTER = ParserAdapter(
    adapter_id="eventlog",
    detect=_eventlog_detect,
    parse_trajectory=_parse_eventlog_trajectory,
    trajectory_path=lambda instance_id: f"trajectory/{instance_id}.jsonl",
)

DEFAULT_ADAPTERS: tuple[ParserAdapter, ...] = (NATIVE_ADAPTER, EVENTLOG_ADAPTER)


def detect_adapter(
    file_tree: Iterable[str],
    adapters: Iterable[ParserAdapter] = DEFAULT_ADAPTERS,
    warnings: Optional[ParseWarnings] = None,
) -> ParserAdapter:
    """Pick the adapter whose detect accepts; registry order breaks ties."""
    paths = sorted(file_tree)
    registry = list(adapters)
    ids = [a.adapter_id for a in registry]
    if len(ids) != len(set(ids)):
        raise ValueError("adapter ids must be unique in the registry")
    matches = [a for a in registry if a.detect(paths)]
    if not matches:
        raise NoAdapterFound("no registered adapter recognizes this upload layout")
    if len(matches) > 1 and warnings is not None:
        warnings.warn(
            "upload layout matches several adapters "
            f"({', '.join(a.adapter_id for a in matches)}); using first-registered "
            f"{matches[0].adapter_id!r}"
        )
    return matches[0]


def parse_trajectory(raw: bytes, adapter: ParserAdapter) -> list[TrajectoryStep]:
    """Normalize one raw trajectory file; indices come out consecutive from 0."""
    return adapter.parse_trajectory(raw)
