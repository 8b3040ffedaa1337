"""Failure-signature rules: map log/trajectory phrases to setup-failure statuses.

Log phrasing is framework-specific, so the rule table is user-configurable:
an ordered list of ``{rule_id, scope, pattern, category}`` entries loaded from
a TOML file (``rules.toml`` next to the store), falling back to the embedded
default set below.

Matching order is fixed and documented because classification depends on it:

1. trajectory-scoped rules, in table order, each tested against the content
   of every *error* or *system* step (step order);
2. if none matched, log-scoped rules, in table order, each tested against
   every log text.

The first rule that matches anywhere decides the category. ``substring``
patterns match case-insensitively; ``regex`` patterns are used as written.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import InvalidRules
from .model import InstanceStatus, StepKind, TrajectoryStep

RULE_SCOPES = ("trajectory", "log")
RULE_CATEGORIES = (
    InstanceStatus.ENV_FAILURE_LLM,
    InstanceStatus.ENV_FAILURE_RUNTIME,
    InstanceStatus.AGENT_LIMIT,
)

RULES_FILENAME = "rules.toml"


@dataclass(frozen=True)
class SignatureRule:
    rule_id: str
    scope: str
    pattern: str
    category: InstanceStatus
    match: str = "substring"  # substring | regex

    def __post_init__(self) -> None:
        if self.scope not in RULE_SCOPES:
            raise InvalidRules(f"rule {self.rule_id!r}: unknown scope {self.scope!r}")
        if self.category not in RULE_CATEGORIES:
            raise InvalidRules(
                f"rule {self.rule_id!r}: category must be one of "
                f"{[c.value for c in RULE_CATEGORIES]}"
            )
        if self.match not in ("substring", "regex"):
            raise InvalidRules(f"rule {self.rule_id!r}: unknown match kind {self.match!r}")
        if self.match == "regex":
            try:
                compiled = re.compile(self.pattern)
            except re.error as exc:
                raise InvalidRules(f"rule {self.rule_id!r}: pattern does not compile: {exc}")
        else:
            compiled = None
        object.__setattr__(self, "_compiled", compiled)

    def matches(self, text: str) -> bool:
        if self.match == "regex":
            return self._compiled.search(text) is not None  # type: ignore[attr-defined]
        return self.pattern.lower() in text.lower()


def default_rules() -> list[SignatureRule]:
    """The documented default ruleset, shipped embedded."""
    table = [
        # scope trajectory
        ("llm-timeout", "trajectory", r"(?i)\bllm\b.{0,80}\b(timed.?out|timeout)\b", "ENV_FAILURE_LLM", "regex"),
        ("llm-connection", "trajectory", r"(?i)\bllm\b.{0,80}\bconnection\b|\bconnection\b.{0,80}\bllm\b", "ENV_FAILURE_LLM", "regex"),
        ("runtime-failure", "trajectory", r"(?i)\b(docker|container|sandbox|runtime)\b.{0,80}\b(fail(ed|ure)?|exit(ed)?|died|crash(ed)?|unreachable|error)\b", "ENV_FAILURE_RUNTIME", "regex"),
        ("max-turns", "trajectory", r"(?i)(exceed(ed)?|reach(ed)?).{0,40}\bmax(imum)?\b.{0,40}\b(turns?|iterations?|steps?)\b|\bmax(imum)?\b( number of)?\s*(turns?|iterations?).{0,40}(exceed(ed)?|reach(ed)?)", "AGENT_LIMIT", "regex"),
        # scope log: same signatures, different artifact
        ("log-llm-timeout", "log", r"(?i)\bllm\b.{0,80}\b(timed.?out|timeout)\b", "ENV_FAILURE_LLM", "regex"),
        ("log-llm-connection", "log", r"(?i)\bllm\b.{0,80}\bconnection\b|\bconnection\b.{0,80}\bllm\b", "ENV_FAILURE_LLM", "regex"),
        ("log-runtime-failure", "log", r"(?i)\b(docker|container|sandbox|runtime)\b.{0,80}\b(fail(ed|ure)?|exit(ed)?|died|crash(ed)?|unreachable|error)\b", "ENV_FAILURE_RUNTIME", "regex"),
        ("log-max-turns", "log", r"(?i)(exceed(ed)?|reach(ed)?).{0,40}\bmax(imum)?\b.{0,40}\b(turns?|iterations?|steps?)\b|\bmax(imum)?\b( number of)?\s*(turns?|iterations?).{0,40}(exceed(ed)?|reach(ed)?)", "AGENT_LIMIT", "regex"),
    ]
    return [
        SignatureRule(rule_id=rid, scope=scope, pattern=pat, category=InstanceStatus(cat), match=match)
        for rid, scope, pat, cat, match in table
    ]


def load_rules(path: Path) -> list[SignatureRule]:
    """Load an ordered rule table from a TOML file.

    Expected layout::

        [[rules]]
        rule_id = "llm-timeout"
        scope = "trajectory"         # trajectory | log
        pattern = "llm request timed out"
        category = "ENV_FAILURE_LLM"
        match = "substring"          # optional; substring | regex
    """
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise InvalidRules(f"cannot load rules from {path}: {exc}")
    entries = data.get("rules")
    if not isinstance(entries, list) or not entries:
        raise InvalidRules(f"{path}: expected a non-empty [[rules]] array")
    rules = []
    for entry in entries:
        try:
            rules.append(
                SignatureRule(
                    rule_id=entry["rule_id"],
                    scope=entry["scope"],
                    pattern=entry["pattern"],
                    category=InstanceStatus(entry["category"]),
                    match=entry.get("match", "substring"),
                )
            )
        except (KeyError, ValueError) as exc:
            raise InvalidRules(f"{path}: bad rule entry {entry!r}: {exc}")
    ids = [r.rule_id for r in rules]
    if len(ids) != len(set(ids)):
        raise InvalidRules(f"{path}: rule ids must be unique")
    return rules


def load_rules_or_default(store_root: Optional[Path]) -> list[SignatureRule]:
    """Rules from ``<store>/rules.toml`` when present, else the embedded default."""
    if store_root is not None:
        path = Path(store_root) / RULES_FILENAME
        if path.is_file():
            return load_rules(path)
    return default_rules()


def match_rules(
    rules: Sequence[SignatureRule],
    steps: Optional[Sequence[TrajectoryStep]],
    logs: Optional[Iterable[str]],
) -> Optional[InstanceStatus]:
    """First matching rule's category, or None.

    Only error/system step content is scanned; thought, tool_call and
    observation steps never trigger rules.
    """
    signal_texts = [
        s.content
        for s in (steps or ())
        if s.kind in (StepKind.ERROR, StepKind.SYSTEM)
    ]
    for rule in rules:
        if rule.scope != "trajectory":
            continue
        for text in signal_texts:
            if rule.matches(text):
                return rule.category
    log_texts = list(logs or ())
    for rule in rules:
        if rule.scope != "log":
            continue
        for text in log_texts:
            if rule.matches(text):
                return rule.category
    return None
