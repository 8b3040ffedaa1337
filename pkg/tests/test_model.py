from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from seaview.model import (
    Benchmark,
    BenchmarkInstance,
    BlobRef,
    EvalOutcome,
    Experiment,
    IngestState,
    InstanceRecord,
    InstanceStatus,
    StatusGroup,
    StepKind,
    TrajectoryStep,
    is_blank_patch,
    parse_timestamp,
    slugify,
    status_group,
)


def test_status_group_examples():
    assert status_group(InstanceStatus.ENV_FAILURE_LLM) is StatusGroup.SETUP_FIXABLE
    assert status_group(InstanceStatus.RESOLVED) is StatusGroup.RESOLVED
    assert status_group(InstanceStatus.BAD_PATCH) is StatusGroup.REPORT_FLAGGED


def test_status_groups_partition_the_enum():
    seen = {}
    for status in InstanceStatus:
        seen[status] = status_group(status)  # total: no KeyError
    assert set(seen) == set(InstanceStatus)
    assert set(seen.values()) == set(StatusGroup)
    assert {s for s, g in seen.items() if g is StatusGroup.SETUP_FIXABLE} == {
        InstanceStatus.ENV_FAILURE_LLM,
        InstanceStatus.ENV_FAILURE_RUNTIME,
        InstanceStatus.AGENT_LIMIT,
    }
    assert {s for s, g in seen.items() if g is StatusGroup.REPORT_FLAGGED} == {
        InstanceStatus.EMPTY_PATCH,
        InstanceStatus.BAD_PATCH,
        InstanceStatus.EVAL_ERROR,
    }


def test_is_blank_patch():
    assert is_blank_patch(None)
    assert is_blank_patch("")
    assert is_blank_patch("  \n\t ")
    assert not is_blank_patch("diff --git a b\n")


def test_slugify():
    assert slugify("My Run #3") == "my-run-3"
    assert slugify("exp_001.v2") == "exp_001.v2"


def test_benchmark_rejects_bad_slug_and_duplicate_ids():
    with pytest.raises(ValueError):
        Benchmark(benchmark_id="Not A Slug", name="x")
    inst = BenchmarkInstance(instance_id="a", repo="o/r", problem_statement="p")
    with pytest.raises(ValueError):
        Benchmark(benchmark_id="ok", name="x", instances=(inst, inst))


def test_tool_call_requires_tool_name():
    with pytest.raises(ValueError):
        TrajectoryStep(index=0, kind=StepKind.TOOL_CALL, content="x")


def test_eval_outcome_invariant():
    with pytest.raises(ValueError):
        EvalOutcome(resolved=True, patch_applied=False)
    EvalOutcome(resolved=True, patch_applied=True)
    EvalOutcome(resolved=True)


def test_record_invariants():
    with pytest.raises(ValueError):
        InstanceRecord(
            experiment_id="e", instance_id="i",
            status=InstanceStatus.EMPTY_PATCH, patch="diff --git\n",
        )
    with pytest.raises(ValueError):
        InstanceRecord(experiment_id="e", instance_id="i", status=InstanceStatus.RESOLVED)


# --- round-trip serialization (value -> external form -> value is identity) ---

_text = st.text(max_size=40)
_opt_text = st.none() | _text
_slug = st.from_regex(r"[a-z0-9_.-]{1,20}", fullmatch=True).filter(lambda s: s.strip("-"))

_instance = st.builds(
    BenchmarkInstance,
    instance_id=st.text(min_size=1, max_size=20),
    repo=_text,
    problem_statement=_text,
    gold_patch=_opt_text,
)


@st.composite
def _benchmarks(draw):
    instances = draw(
        st.lists(_instance, max_size=5, unique_by=lambda i: i.instance_id)
    )
    return Benchmark(
        benchmark_id=draw(_slug),
        name=draw(_text),
        instances=tuple(instances),
    )


@st.composite
def _steps(draw):
    kind = draw(st.sampled_from(list(StepKind)))
    tool_name = draw(st.text(min_size=1, max_size=10)) if kind is StepKind.TOOL_CALL else draw(st.none() | st.text(min_size=1, max_size=10))
    return TrajectoryStep(
        index=draw(st.integers(min_value=0, max_value=10_000)),
        kind=kind,
        content=draw(_text),
        tool_name=tool_name,
        tool_args=draw(st.none() | st.dictionaries(st.text(max_size=5), st.integers() | _text, max_size=3)),
        timestamp=draw(st.none() | st.just("2025-01-01T00:00:00+00:00")),
    )


@st.composite
def _evals(draw):
    resolved = draw(st.booleans())
    patch_applied = draw(st.none() | st.just(True)) if resolved else draw(st.none() | st.booleans())
    return EvalOutcome(
        resolved=resolved,
        patch_applied=patch_applied,
        harness_error=draw(_opt_text),
    )


_blob_ref = st.builds(
    BlobRef,
    digest=st.from_regex(r"[0-9a-f]{64}", fullmatch=True),
    size=st.integers(min_value=0, max_value=2**40),
    media_hint=st.sampled_from(["trajectory", "log", "raw"]),
)


@st.composite
def _records(draw):
    status = draw(st.sampled_from(list(InstanceStatus)))
    if status is InstanceStatus.EMPTY_PATCH:
        patch = draw(st.none() | st.just(" \n"))
    else:
        patch = draw(_opt_text)
    if status is InstanceStatus.RESOLVED:
        eval_outcome = EvalOutcome(resolved=True)
    else:
        eval_outcome = draw(st.none() | _evals().filter(lambda e: not e.resolved))
    return InstanceRecord(
        experiment_id=draw(_slug),
        instance_id=draw(st.text(min_size=1, max_size=20)),
        status=status,
        patch=patch,
        trajectory_ref=draw(st.none() | _blob_ref),
        log_refs=tuple(draw(st.lists(_blob_ref, max_size=3))),
        eval=eval_outcome,
        step_count=draw(st.none() | st.integers(min_value=0, max_value=10_000)),
    )


@given(_benchmarks())
def test_benchmark_round_trip(benchmark):
    assert Benchmark.from_dict(benchmark.to_dict()) == benchmark


@given(_steps())
def test_step_round_trip(step):
    assert TrajectoryStep.from_dict(step.to_dict()) == step


@given(_evals())
def test_eval_round_trip(outcome):
    assert EvalOutcome.from_dict(outcome.to_dict()) == outcome


@given(_records())
def test_record_round_trip(record):
    assert InstanceRecord.from_dict(record.to_dict()) == record


@given(_slug, _slug, _text, _text)
def test_experiment_round_trip(eid, bid, framework, model):
    experiment = Experiment(
        experiment_id=eid,
        benchmark_id=bid,
        agent_framework=framework,
        model_name=model,
        created_at=parse_timestamp("2025-03-04T05:06:07+00:00"),
        source_uri="/tmp/x",
        content_hash="ab" * 32,
        ingest_state=IngestState.READY,
    )
    assert Experiment.from_dict(experiment.to_dict()) == experiment


def test_parse_timestamp_accepts_z_suffix():
    assert parse_timestamp("2025-01-01T00:00:00Z") == parse_timestamp("2025-01-01T00:00:00+00:00")
