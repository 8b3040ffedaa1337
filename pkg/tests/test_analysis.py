from __future__ import annotations

import itertools
import random
import shutil

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seaview import analysis
from seaview.cli import _parse_benchmark_file
from seaview.errors import (
    BadQuery,
    BenchmarkMismatch,
    EmptySelection,
    ExperimentNotReady,
    UnknownInstance,
)
from seaview.ingest import ingest_experiment
from seaview.model import (
    EvalOutcome,
    InstanceStatus,
    StepKind,
    TrajectoryStep,
)
from seaview.parsers import PredictionRecord
from seaview.rules import default_rules
from seaview.store import Store

from helpers import put_benchmark, put_experiment
from oracle import oracle_classify, oracle_classify_experiment_dir, rules_as_dicts

RULES = default_rules()


def _steps(*contents_and_kinds) -> list[TrajectoryStep]:
    steps = []
    for i, (kind, content) in enumerate(contents_and_kinds):
        tool = "bash" if kind is StepKind.TOOL_CALL else None
        steps.append(TrajectoryStep(index=i, kind=kind, content=content, tool_name=tool))
    return steps


def _prediction(patch: str = "diff --git a b\n") -> PredictionRecord:
    return PredictionRecord(instance_id="i", model_patch=patch)


class TestClassify:
    def test_resolved_dominates_timeout_line(self):
        steps = _steps((StepKind.ERROR, "LLM request timed out"))
        status = analysis.classify_instance(
            _prediction(), steps, EvalOutcome(resolved=True), None, RULES
        )
        assert status is InstanceStatus.RESOLVED

    def test_llm_timeout_error_step(self):
        steps = _steps((StepKind.ERROR, "LLM request timed out"))
        assert (
            analysis.classify_instance(None, steps, None, None, RULES)
            is InstanceStatus.ENV_FAILURE_LLM
        )

    def test_max_iterations_log(self):
        assert (
            analysis.classify_instance(None, None, None, ["max iterations reached"], RULES)
            is InstanceStatus.AGENT_LIMIT
        )

    def test_empty_patch_listed_by_harness(self):
        status = analysis.classify_instance(
            _prediction(""), None, EvalOutcome(resolved=False), None, RULES
        )
        assert status is InstanceStatus.EMPTY_PATCH

    def test_bad_patch(self):
        status = analysis.classify_instance(
            _prediction(), None, EvalOutcome(resolved=False, patch_applied=False), None, RULES
        )
        assert status is InstanceStatus.BAD_PATCH

    def test_harness_error(self):
        status = analysis.classify_instance(
            _prediction(), None, EvalOutcome(resolved=False, harness_error="boom"), None, RULES
        )
        assert status is InstanceStatus.EVAL_ERROR

    def test_unresolved(self):
        status = analysis.classify_instance(
            _prediction(), None, EvalOutcome(resolved=False, patch_applied=True), None, RULES
        )
        assert status is InstanceStatus.UNRESOLVED

    def test_no_artifacts_is_missing(self):
        assert analysis.classify_instance(None, None, None, None, RULES) is InstanceStatus.MISSING
        assert analysis.classify_instance(None, None, None, [], RULES) is InstanceStatus.MISSING

    def test_patch_never_evaluated_is_eval_error(self):
        assert (
            analysis.classify_instance(_prediction(), None, None, None, RULES)
            is InstanceStatus.EVAL_ERROR
        )

    def test_artifacts_present_override(self):
        # raw unparseable trajectory exists on disk: not MISSING
        status = analysis.classify_instance(
            None, None, None, None, RULES, artifacts_present=True
        )
        assert status is InstanceStatus.EMPTY_PATCH

    def test_fixture_statuses_match_declared_labels(self, corpus_dir, expected, fixture_store):
        benchmark = fixture_store.get_benchmark("fixture-lite")
        for eid, declared in expected["statuses"].items():
            stored = {
                r.instance_id: r.status.value for r in fixture_store.list_records(eid)
            }
            oracle = oracle_classify_experiment_dir(
                corpus_dir / "experiments" / eid,
                benchmark.instance_ids,
                rules_as_dicts(RULES),
            )
            assert stored == declared
            assert oracle == declared


# --- randomized classifier-vs-oracle agreement -------------------------------


def _random_classify_input(rng: random.Random):
    prediction = None
    if rng.random() < 0.7:
        patch = rng.choice(["", "  \n", "diff --git a/x b/x\n+1\n"])
        prediction = PredictionRecord(instance_id="i", model_patch=patch)

    trajectory = None
    if rng.random() < 0.7:
        trajectory = []
        phrases = [
            "looking at the code",
            "LLM request timed out",
            "connection to the LLM provider was lost",
            "docker container exited with an error",
            "exceeded the maximum number of turns",
            "everything is fine here",
        ]
        for i in range(rng.randint(0, 5)):
            kind = rng.choice(list(StepKind))
            content = rng.choice(phrases)
            tool = "bash" if kind is StepKind.TOOL_CALL else None
            trajectory.append(
                TrajectoryStep(index=i, kind=kind, content=content, tool_name=tool)
            )

    eval_outcome = None
    if rng.random() < 0.6:
        resolved = rng.random() < 0.4
        patch_applied = rng.choice([None, True]) if resolved else rng.choice([None, True, False])
        harness_error = rng.choice([None, "harness exploded"])
        eval_outcome = EvalOutcome(
            resolved=resolved, patch_applied=patch_applied, harness_error=harness_error
        )

    logs = None
    if rng.random() < 0.5:
        logs = rng.sample(
            ["run completed", "max iterations reached", "llm timeout while streaming",
             "container runtime died", "nothing to see"],
            k=rng.randint(0, 3),
        )
    return prediction, trajectory, eval_outcome, logs


def _as_oracle_input(prediction, trajectory, eval_outcome, logs):
    p = {"instance_id": "i", "model_patch": prediction.model_patch} if prediction else None
    t = [{"kind": s.kind.value, "content": s.content} for s in trajectory] if trajectory is not None else None
    e = None
    if eval_outcome is not None:
        e = {
            "resolved": eval_outcome.resolved,
            "patch_applied": eval_outcome.patch_applied,
            "harness_error": eval_outcome.harness_error,
        }
    return p, t, e, logs


def test_classifier_equals_oracle_on_500_randomized_inputs():
    rng = random.Random(20250810)
    rule_dicts = rules_as_dicts(RULES)
    for case in range(500):
        prediction, trajectory, eval_outcome, logs = _random_classify_input(rng)
        got = analysis.classify_instance(prediction, trajectory, eval_outcome, logs, RULES)
        p, t, e, l = _as_oracle_input(prediction, trajectory, eval_outcome, logs)
        want = oracle_classify(p, t, e, l, rule_dicts)
        assert got.value == want, f"case {case}: {prediction} {trajectory} {eval_outcome} {logs}"


@given(st.data())
@settings(max_examples=150, deadline=None)
def test_classification_ignores_rule_irrelevant_step_permutations(data):
    # permuting steps that no rule looks at never changes the status
    benign = [
        TrajectoryStep(index=i, kind=kind, content=content)
        for i, (kind, content) in enumerate(
            data.draw(
                st.lists(
                    st.tuples(
                        st.sampled_from([StepKind.THOUGHT, StepKind.OBSERVATION]),
                        st.sampled_from(["LLM request timed out", "max turns exceeded", "ok"]),
                    ),
                    max_size=6,
                )
            )
        )
    ]
    shuffled = data.draw(st.permutations(benign))
    shuffled = [
        TrajectoryStep(index=i, kind=s.kind, content=s.content) for i, s in enumerate(shuffled)
    ]
    base = analysis.classify_instance(_prediction(), benign, None, None, RULES)
    assert analysis.classify_instance(_prediction(), shuffled, None, None, RULES) == base


@given(st.integers(0, 2**32))
@settings(max_examples=150, deadline=None)
def test_adding_resolving_eval_always_yields_resolved(seed):
    rng = random.Random(seed)
    prediction, trajectory, _, logs = _random_classify_input(rng)
    status = analysis.classify_instance(
        prediction, trajectory, EvalOutcome(resolved=True), logs, RULES
    )
    assert status is InstanceStatus.RESOLVED


# --- the four analyses over the fixture store ---------------------------------


def test_health_breakdown_matches_oracle_recount(fixture_store, expected):
    for eid, want in expected["health"].items():
        assert analysis.health_breakdown(fixture_store, eid).to_dict() == want


def test_health_counts_sum_to_benchmark_size(fixture_store, expected):
    n = len(fixture_store.get_benchmark("fixture-lite").instances)
    for eid in expected["experiment_ids"]:
        breakdown = analysis.health_breakdown(fixture_store, eid)
        assert sum(breakdown.to_dict()["counts"].values()) == n


def test_report_matches_oracle_recount(fixture_store, expected):
    for eid, want in expected["reports"].items():
        assert analysis.build_report(fixture_store, eid).to_dict() == want


def test_report_rate_arithmetic(fixture_store):
    report = analysis.build_report(fixture_store, "exp-001")
    assert report.resolved_rate == report.n_resolved / report.n_instances


def test_compare_matches_brute_force_oracle(fixture_store, expected):
    for pair, want in expected["comparisons"].items():
        baseline, target = pair.split("|")
        assert analysis.compare(fixture_store, baseline, target).to_dict() == want


def test_compare_self_is_empty(fixture_store):
    result = analysis.compare(fixture_store, "exp-001", "exp-001")
    assert result.gain == frozenset()
    assert result.regression == frozenset()


def test_compare_set_algebra_example(fresh_store):
    # resolved(B)={a,b}, resolved(T)={b,c} over {a,b,c,d}
    put_benchmark(fresh_store, "mini", list("abcd"))
    put_experiment(fresh_store, "mini", "B", {
        "a": InstanceStatus.RESOLVED, "b": InstanceStatus.RESOLVED,
        "c": InstanceStatus.UNRESOLVED, "d": InstanceStatus.UNRESOLVED,
    })
    put_experiment(fresh_store, "mini", "T", {
        "a": InstanceStatus.UNRESOLVED, "b": InstanceStatus.RESOLVED,
        "c": InstanceStatus.RESOLVED, "d": InstanceStatus.UNRESOLVED,
    })
    result = analysis.compare(fresh_store, "B", "T")
    assert result.gain == {"c"}
    assert result.regression == {"a"}
    assert result.both_resolved == {"b"}
    assert result.neither == {"d"}
    assert result.transitions[(InstanceStatus.RESOLVED, InstanceStatus.UNRESOLVED)] == 1
    assert sum(result.transitions.values()) == 4


def test_compare_instance_detail(fixture_store, expected, expected_steps):
    statuses = expected["statuses"]
    for iid, base_status in statuses["exp-001"].items():
        detail = analysis.compare_instance(fixture_store, "exp-001", "exp-002", iid)
        assert detail["instance_id"] == iid
        assert detail["baseline"]["status"] == base_status
        assert detail["target"]["status"] == statuses["exp-002"][iid]
        assert detail["baseline"]["trajectory"] == expected_steps["exp-001"].get(iid)
        if base_status == "MISSING":
            assert detail["baseline"]["patch"] is None
            assert detail["baseline"]["trajectory"] is None


def test_compare_instance_unknown_id(fixture_store):
    with pytest.raises(UnknownInstance):
        analysis.compare_instance(fixture_store, "exp-001", "exp-002", "ghost")


def test_summarize_matches_union_oracle(fixture_store, expected):
    got = analysis.summarize(fixture_store, expected["experiment_ids"]).to_dict()
    assert got == expected["summarization"]


def test_summarize_single_experiment_equals_report(fixture_store):
    report = analysis.build_report(fixture_store, "exp-001")
    result = analysis.summarize(fixture_store, ["exp-001"])
    assert result.union_resolved == analysis.resolved_set(fixture_store, "exp-001")
    assert result.upper_bound_rate == report.resolved_rate


def test_summarize_set_example(fresh_store):
    # resolved sets {a}, {b}, {a,c} over {a,b,c} -> union {a,b,c}; a:2, b:1, c:1
    put_benchmark(fresh_store, "mini", list("abc"))
    for eid, resolved in (("E1", {"a"}), ("E2", {"b"}), ("E3", {"a", "c"})):
        put_experiment(fresh_store, "mini", eid, {
            i: InstanceStatus.RESOLVED if i in resolved else InstanceStatus.UNRESOLVED
            for i in "abc"
        })
    result = analysis.summarize(fresh_store, ["E1", "E2", "E3"])
    assert result.union_resolved == {"a", "b", "c"}
    assert result.per_instance_counts == {"a": 2, "b": 1, "c": 1}


def test_summarize_order_invariance_and_errors(fixture_store):
    ids = ["exp-001", "exp-002", "exp-003"]
    a = analysis.summarize(fixture_store, ids)
    b = analysis.summarize(fixture_store, list(reversed(ids)))
    assert a == b
    with pytest.raises(EmptySelection):
        analysis.summarize(fixture_store, [])


def test_not_ready_experiments_are_rejected(corpus_dir, tmp_path):
    store = Store(tmp_path / "store")
    store.put_benchmark(_parse_benchmark_file(corpus_dir / "fixture-lite.jsonl"))
    broken = tmp_path / "up" / "exp-broken"
    shutil.copytree(corpus_dir / "experiments" / "exp-001", broken)
    (broken / "manifest.json").write_text("{oops")
    failed = ingest_experiment(store, broken, RULES)
    for op in (
        lambda: analysis.build_report(store, failed.experiment_id),
        lambda: analysis.health_breakdown(store, failed.experiment_id),
        lambda: analysis.summarize(store, [failed.experiment_id]),
    ):
        with pytest.raises(ExperimentNotReady):
            op()


def test_benchmark_mismatch_rejected(fresh_store):
    put_benchmark(fresh_store, "bench-a", ["a1"])
    put_benchmark(fresh_store, "bench-b", ["b1"])
    put_experiment(fresh_store, "bench-a", "EA", {"a1": InstanceStatus.RESOLVED})
    put_experiment(fresh_store, "bench-b", "EB", {"b1": InstanceStatus.UNRESOLVED})
    with pytest.raises(BenchmarkMismatch):
        analysis.compare(fresh_store, "EA", "EB")
    with pytest.raises(BenchmarkMismatch):
        analysis.summarize(fresh_store, ["EA", "EB"])


def test_instance_summaries_filters(fixture_store, expected):
    eid = "exp-001"
    declared = expected["statuses"][eid]
    all_rows = analysis.instance_summaries(fixture_store, eid)
    assert [r["instance_id"] for r in all_rows] == sorted(declared)
    fixable = analysis.instance_summaries(fixture_store, eid, group="setup_fixable")
    assert [r["instance_id"] for r in fixable] == expected["health"][eid]["fixable_ids"]
    resolved = analysis.instance_summaries(fixture_store, eid, status="RESOLVED")
    assert all(r["status"] == "RESOLVED" for r in resolved)
    assert len(resolved) == expected["reports"][eid]["n_resolved"]
    with pytest.raises(BadQuery):
        analysis.instance_summaries(fixture_store, eid, status="NOT_A_STATUS")
    with pytest.raises(BadQuery):
        analysis.instance_summaries(fixture_store, eid, group="nope")


# --- randomized set-algebra properties over the real operations ----------------


@pytest.fixture(scope="module")
def algebra_store(tmp_path_factory):
    """One shared store; each property example adds experiments under new ids."""
    store = Store(tmp_path_factory.mktemp("algebra"))
    put_benchmark(store, "alg", [f"i{k:02d}" for k in range(10)])
    return store


_counter = itertools.count()


def _random_experiments(store: Store, rng: random.Random, how_many: int) -> list[str]:
    ids = []
    instance_ids = [f"i{k:02d}" for k in range(10)]
    for _ in range(how_many):
        eid = f"exp-{next(_counter):06d}"
        statuses = {
            iid: rng.choice(list(InstanceStatus)) for iid in instance_ids
        }
        put_experiment(store, "alg", eid, statuses)
        ids.append(eid)
    return ids


@given(st.integers(0, 2**32))
@settings(max_examples=100, deadline=None)
def test_compare_properties_on_random_stores(algebra_store, seed):
    rng = random.Random(seed)
    baseline, target = _random_experiments(algebra_store, rng, 2)
    forward = analysis.compare(algebra_store, baseline, target)
    backward = analysis.compare(algebra_store, target, baseline)
    instance_set = {f"i{k:02d}" for k in range(10)}
    parts = [forward.both_resolved, forward.gain, forward.regression, forward.neither]
    assert frozenset().union(*parts) == instance_set
    assert sum(len(p) for p in parts) == len(instance_set)
    assert forward.gain == backward.regression
    assert forward.regression == backward.gain
    assert sum(forward.transitions.values()) == len(instance_set)
    self_compare = analysis.compare(algebra_store, baseline, baseline)
    assert self_compare.gain == frozenset() and self_compare.regression == frozenset()


@given(st.integers(0, 2**32))
@settings(max_examples=60, deadline=None)
def test_summarize_properties_on_random_stores(algebra_store, seed):
    rng = random.Random(seed)
    ids = _random_experiments(algebra_store, rng, rng.randint(1, 4))
    result = analysis.summarize(algebra_store, ids)
    shuffled = ids[:]
    rng.shuffle(shuffled)
    assert analysis.summarize(algebra_store, shuffled) == result
    # monotone: adding an experiment never shrinks the union
    extra = _random_experiments(algebra_store, rng, 1)
    grown = analysis.summarize(algebra_store, ids + extra)
    assert result.union_resolved <= grown.union_resolved
    # upper bound dominates every constituent rate
    for eid in ids:
        assert result.upper_bound_rate >= analysis.build_report(algebra_store, eid).resolved_rate
    assert result.union_resolved == {
        i for i, n in result.per_instance_counts.items() if n >= 1
    }
