"""Deterministic fixture corpora for verification at desk scale.

``generate_corpus`` writes one benchmark definition file plus k native-format
experiment directories, and two sidecars:

* ``expected.json``: per-instance statuses, report numbers, health
  breakdowns, every ordered pairwise comparison, and the summarization union,
  all computed here by construction from the planned status table. Nothing in
  this module calls the analysis code; the sidecar is the independent answer
  key the analyses are checked against.
* ``expected_steps.json``: the normalized step list every well-formed
  trajectory must parse to.

Same seed, same bytes: all content derives from the seed, never from the
clock or filesystem order.

Layout::

    <out>/
      fixture-lite.jsonl        benchmark definition (id = file stem)
      expected.json
      expected_steps.json
      experiments/
        exp-001/ ... exp-00k/   native upload layout
"""

from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Any, Optional

from .model import InstanceStatus

BENCHMARK_ID = "fixture-lite"
AGENT_FRAMEWORK = "toyagent"

# Composition of the first two experiments at the default size of 12, chosen
# so the corpus exercises every status and both all-but-two and two-missing
# artifact coverage. Remaining experiments get one of each status plus a
# weighted random fill.
_PLAN_EXP0 = (
    [InstanceStatus.RESOLVED] * 5
    + [InstanceStatus.UNRESOLVED] * 2
    + [
        InstanceStatus.EMPTY_PATCH,
        InstanceStatus.BAD_PATCH,
        InstanceStatus.ENV_FAILURE_LLM,
        InstanceStatus.AGENT_LIMIT,
        InstanceStatus.MISSING,
    ]
)
_PLAN_EXP1 = (
    [InstanceStatus.RESOLVED] * 4
    + [
        InstanceStatus.UNRESOLVED,
        InstanceStatus.EMPTY_PATCH,
        InstanceStatus.BAD_PATCH,
        InstanceStatus.EVAL_ERROR,
        InstanceStatus.ENV_FAILURE_RUNTIME,
        InstanceStatus.ENV_FAILURE_LLM,
    ]
    + [InstanceStatus.MISSING] * 2
)

_FILL_WEIGHTS = {
    InstanceStatus.RESOLVED: 5,
    InstanceStatus.UNRESOLVED: 3,
    InstanceStatus.EMPTY_PATCH: 1,
    InstanceStatus.BAD_PATCH: 1,
    InstanceStatus.EVAL_ERROR: 1,
    InstanceStatus.ENV_FAILURE_LLM: 1,
    InstanceStatus.ENV_FAILURE_RUNTIME: 1,
    InstanceStatus.AGENT_LIMIT: 1,
    InstanceStatus.MISSING: 1,
}

_ISSUE_TITLES = [
    "crash when parsing empty config",
    "off-by-one in pagination cursor",
    "wrong rounding in totals column",
    "regression in date formatting",
    "unicode mangled in export file",
    "cache never invalidated on rename",
    "duplicate rows after merge",
    "missing validation on form submit",
]

_THOUGHTS = [
    "Reading the issue and locating the relevant code.",
    "The traceback points at the parsing helper.",
    "Plan: reproduce first, then patch the boundary check.",
    "The failing case needs an extra guard clause.",
]

_OBSERVATIONS = [
    "Found 2 matching files under src/.",
    "Reproduced the bug with the snippet from the issue.",
    "Edit applied cleanly.",
    "All local checks pass now.",
]

_LLM_FAILURE_PHRASES = [
    "LLM request timed out after 120 seconds",
    "connection to the LLM provider was lost mid-request",
]
_RUNTIME_FAILURE_LOGS = [
    "docker: container exited unexpectedly (exit code 137)",
    "sandbox runtime unreachable after restart",
]
_AGENT_LIMIT_STEP = "Agent stopped: exceeded the maximum number of turns (50)"
_AGENT_LIMIT_LOG = "max iterations reached, giving up"
_BENIGN_LOG = "run completed in {secs}s\nexit status recorded\n"


def _instance_id(i: int) -> str:
    return f"demo__proj-{i + 1:04d}"


def _experiment_id(j: int) -> str:
    return f"exp-{j + 1:03d}"


def _patch_text(rng: random.Random, iid: str) -> str:
    line = rng.randint(5, 90)
    return (
        f"diff --git a/src/app.py b/src/app.py\n"
        f"index {rng.randrange(16**7):07x}..{rng.randrange(16**7):07x} 100644\n"
        f"--- a/src/app.py\n"
        f"+++ b/src/app.py\n"
        f"@@ -{line},7 +{line},7 @@ def handler(value):\n"
        f"-    return value - 1  # {iid}\n"
        f"+    return value + 1  # {iid}\n"
    )


def _status_plan(rng: random.Random, j: int, k: int, m: int) -> list[InstanceStatus]:
    # The pinned first-two plans need a sibling to cover the other statuses.
    if j == 0 and m == 12 and k >= 2:
        plan = list(_PLAN_EXP0)
    elif j == 1 and m == 12:
        plan = list(_PLAN_EXP1)
    else:
        plan = list(InstanceStatus)[:m]
        if len(plan) < m:
            population = list(_FILL_WEIGHTS)
            weights = [_FILL_WEIGHTS[s] for s in population]
            plan += rng.choices(population, weights=weights, k=m - len(plan))
    rng.shuffle(plan)
    return plan


def _benign_steps(rng: random.Random, iid: str) -> tuple[list[dict], list[dict]]:
    """(raw upload steps, expected normalized steps) for an uneventful run."""
    n_rounds = rng.randint(1, 2)
    raw: list[dict] = [{"kind": "thought", "content": rng.choice(_THOUGHTS)}]
    for _ in range(n_rounds):
        raw.append(
            {
                "kind": "tool_call",
                "content": "running shell command",
                "tool_name": "bash",
                "tool_args": {"command": f"grep -rn '{iid}' src/"},
            }
        )
        raw.append({"kind": "observation", "content": rng.choice(_OBSERVATIONS)})
    return raw, _normalize(raw)


def _mixed_seven_steps(created_at: str) -> tuple[list[dict], list[dict]]:
    """The canonical 7-step trajectory: mixed kinds plus one unknown kind."""
    raw = [
        {"kind": "thought", "content": "Reading the issue and locating the relevant code."},
        {"kind": "tool_call", "content": "running shell command", "tool_name": "bash",
         "tool_args": {"command": "grep -rn 'handler' src/"}, "timestamp": created_at},
        {"kind": "observation", "content": "Found 2 matching files under src/."},
        {"kind": "budget", "content": "checkpoint: 40% of step budget used"},
        {"kind": "thought", "content": "The failing case needs an extra guard clause."},
        {"kind": "tool_call", "content": "editing file", "tool_name": "editor",
         "tool_args": {"path": "src/app.py"}},
        {"kind": "observation", "content": "Edit applied cleanly."},
    ]
    return raw, _normalize(raw)


def _normalize(raw_steps: list[dict]) -> list[dict]:
    """The normalized form the parser contract promises for these steps."""
    known = {"thought", "tool_call", "observation", "error", "system"}
    out = []
    for index, step in enumerate(raw_steps):
        kind = step["kind"]
        content = step["content"]
        if kind not in known:
            content = f"[{kind}] {content}"
            kind = "system"
        out.append(
            {
                "index": index,
                "kind": kind,
                "content": content,
                "tool_name": step.get("tool_name"),
                "tool_args": step.get("tool_args"),
                "timestamp": step.get("timestamp"),
            }
        )
    return out


def _write_json(path: Path, payload: Any) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def generate_corpus(
    out_dir: Path,
    seed: int = 7,
    experiments: int = 3,
    instances: int = 12,
) -> dict[str, Any]:
    """Write the corpus and sidecars; returns the expected.json payload."""
    if experiments < 1 or instances < 1:
        raise ValueError("need at least one experiment and one instance")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)

    instance_ids = [_instance_id(i) for i in range(instances)]
    experiment_ids = [_experiment_id(j) for j in range(experiments)]

    # Benchmark definition file.
    benchmark_lines = []
    for i, iid in enumerate(instance_ids):
        entry: dict[str, Any] = {
            "instance_id": iid,
            "repo": "demo/proj",
            "problem_statement": f"Issue {i + 1}: {_ISSUE_TITLES[i % len(_ISSUE_TITLES)]}",
        }
        if rng.random() < 0.5:
            entry["gold_patch"] = _patch_text(rng, iid)
        benchmark_lines.append(json.dumps(entry))
    (out_dir / f"{BENCHMARK_ID}.jsonl").write_text(
        "\n".join(benchmark_lines) + "\n", encoding="utf-8"
    )

    statuses: dict[str, dict[str, str]] = {}
    expected_steps: dict[str, dict[str, list[dict]]] = {}
    experiments_dir = out_dir / "experiments"

    for j, eid in enumerate(experiment_ids):
        plan = _status_plan(rng, j, experiments, instances)
        assignment = dict(zip(instance_ids, plan))
        statuses[eid] = {iid: s.value for iid, s in assignment.items()}
        created_at = f"2025-01-{j + 1:02d}T00:00:00+00:00"

        exp_dir = experiments_dir / eid
        (exp_dir / "trajs").mkdir(parents=True, exist_ok=True)
        (exp_dir / "logs").mkdir(parents=True, exist_ok=True)

        _write_json(
            exp_dir / "manifest.json",
            {
                "benchmark_id": BENCHMARK_ID,
                "agent_framework": AGENT_FRAMEWORK,
                "model_name": f"toy-{j + 1}",
                "created_at": created_at,
            },
        )

        predictions: list[str] = []
        report: dict[str, list[str]] = {key: [] for key in (
            "resolved_ids", "unresolved_ids", "error_ids", "apply_failed_ids", "empty_patch_ids",
        )}
        steps_sidecar: dict[str, list[dict]] = {}
        seen_resolved = 0
        seen_agent_limit = 0
        seen_llm = 0
        seen_runtime = 0

        for iid in instance_ids:
            status = assignment[iid]
            raw_steps: Optional[list[dict]] = None

            if status is InstanceStatus.MISSING:
                continue

            if status is InstanceStatus.RESOLVED:
                seen_resolved += 1
                if seen_resolved == 1:
                    raw_steps, normalized = _mixed_seven_steps(created_at)
                else:
                    raw_steps, normalized = _benign_steps(rng, iid)
                predictions.append(json.dumps({"instance_id": iid, "model_patch": _patch_text(rng, iid)}))
                report["resolved_ids"].append(iid)
                (exp_dir / "logs" / f"{iid}.log").write_text(
                    _BENIGN_LOG.format(secs=rng.randint(30, 900)), encoding="utf-8"
                )
            elif status is InstanceStatus.UNRESOLVED:
                raw_steps, normalized = _benign_steps(rng, iid)
                predictions.append(json.dumps({"instance_id": iid, "model_patch": _patch_text(rng, iid)}))
                report["unresolved_ids"].append(iid)
            elif status is InstanceStatus.EMPTY_PATCH:
                # First empty-patch instance of the corpus keeps an empty
                # trajectory so the zero-step path is exercised end to end.
                if j == 0:
                    raw_steps, normalized = [], []
                else:
                    raw_steps, normalized = _benign_steps(rng, iid)
                predictions.append(json.dumps({"instance_id": iid, "model_patch": ""}))
                report["empty_patch_ids"].append(iid)
            elif status is InstanceStatus.BAD_PATCH:
                raw_steps, normalized = _benign_steps(rng, iid)
                predictions.append(json.dumps({"instance_id": iid, "model_patch": _patch_text(rng, iid)}))
                report["apply_failed_ids"].append(iid)
            elif status is InstanceStatus.EVAL_ERROR:
                raw_steps, normalized = _benign_steps(rng, iid)
                predictions.append(json.dumps({"instance_id": iid, "model_patch": _patch_text(rng, iid)}))
                report["error_ids"].append(iid)
            elif status is InstanceStatus.ENV_FAILURE_LLM:
                raw_steps, normalized = _benign_steps(rng, iid)
                phrase = _LLM_FAILURE_PHRASES[seen_llm % len(_LLM_FAILURE_PHRASES)]
                seen_llm += 1
                raw_steps = raw_steps + [{"kind": "error", "content": phrase}]
                normalized = _normalize(raw_steps)
            elif status is InstanceStatus.ENV_FAILURE_RUNTIME:
                raw_steps, normalized = _benign_steps(rng, iid)
                log_line = _RUNTIME_FAILURE_LOGS[seen_runtime % len(_RUNTIME_FAILURE_LOGS)]
                seen_runtime += 1
                (exp_dir / "logs" / f"{iid}.log").write_text(log_line + "\n", encoding="utf-8")
            elif status is InstanceStatus.AGENT_LIMIT:
                raw_steps, normalized = _benign_steps(rng, iid)
                if seen_agent_limit % 2 == 0:
                    raw_steps = raw_steps + [{"kind": "error", "content": _AGENT_LIMIT_STEP}]
                    normalized = _normalize(raw_steps)
                else:
                    (exp_dir / "logs" / f"{iid}.log").write_text(
                        _AGENT_LIMIT_LOG + "\n", encoding="utf-8"
                    )
                seen_agent_limit += 1

            if raw_steps is not None:
                _write_json(exp_dir / "trajs" / f"{iid}.json", raw_steps)
                steps_sidecar[iid] = normalized

        (exp_dir / "predictions.jsonl").write_text(
            "\n".join(predictions) + ("\n" if predictions else ""), encoding="utf-8"
        )
        _write_json(exp_dir / "report.json", report)
        expected_steps[eid] = steps_sidecar

    expected = _compute_expected(seed, experiment_ids, instance_ids, statuses, experiments, instances)
    _write_json(out_dir / "expected.json", expected)
    _write_json(out_dir / "expected_steps.json", expected_steps)
    return expected


def _compute_expected(
    seed: int,
    experiment_ids: list[str],
    instance_ids: list[str],
    statuses: dict[str, dict[str, str]],
    k: int,
    m: int,
) -> dict[str, Any]:
    """Answer key derived from the status table alone, by construction."""
    setup_fixable = {"ENV_FAILURE_LLM", "ENV_FAILURE_RUNTIME", "AGENT_LIMIT"}
    status_order = [s.value for s in InstanceStatus]

    health = {}
    reports = {}
    for eid in experiment_ids:
        table = statuses[eid]
        counts = {s: 0 for s in status_order}
        for s in table.values():
            counts[s] += 1
        n_resolved = counts["RESOLVED"]
        health[eid] = {
            "experiment_id": eid,
            "counts": counts,
            "fixable_ids": sorted(i for i, s in table.items() if s in setup_fixable),
        }
        reports[eid] = {
            "experiment_id": eid,
            "n_instances": m,
            "n_resolved": n_resolved,
            "resolved_rate": n_resolved / m,
            "n_empty_patch": counts["EMPTY_PATCH"],
            "n_bad_patch": counts["BAD_PATCH"],
            "n_eval_error": counts["EVAL_ERROR"],
            "n_missing": counts["MISSING"],
        }

    resolved_sets = {
        eid: {i for i, s in statuses[eid].items() if s == "RESOLVED"} for eid in experiment_ids
    }

    comparisons = {}
    for base in experiment_ids:
        for target in experiment_ids:
            if base == target:
                continue
            b, t = resolved_sets[base], resolved_sets[target]
            transitions: dict[str, int] = {}
            for iid in instance_ids:
                key = f"{statuses[base][iid]}->{statuses[target][iid]}"
                transitions[key] = transitions.get(key, 0) + 1
            comparisons[f"{base}|{target}"] = {
                "baseline_id": base,
                "target_id": target,
                "both_resolved": sorted(b & t),
                "gain": sorted(t - b),
                "regression": sorted(b - t),
                "neither": sorted(set(instance_ids) - b - t),
                "transitions": {key: transitions[key] for key in sorted(transitions)},
            }

    per_instance_counts = {
        iid: sum(1 for eid in experiment_ids if iid in resolved_sets[eid])
        for iid in instance_ids
    }
    union = sorted(iid for iid, n in per_instance_counts.items() if n >= 1)
    summarization = {
        "experiment_ids": sorted(experiment_ids),
        "union_resolved": union,
        "per_instance_counts": {iid: per_instance_counts[iid] for iid in sorted(per_instance_counts)},
        "upper_bound_rate": len(union) / m,
    }

    return {
        "seed": seed,
        "k_experiments": k,
        "m_instances": m,
        "benchmark_id": BENCHMARK_ID,
        "benchmark_file": f"{BENCHMARK_ID}.jsonl",
        "experiment_ids": experiment_ids,
        "statuses": statuses,
        "health": health,
        "reports": reports,
        "comparisons": comparisons,
        "summarization": summarization,
    }
