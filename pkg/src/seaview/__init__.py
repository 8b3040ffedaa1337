"""seaview: analysis platform for large-scale SWE-agent experiments."""

from .model import (
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
    status_group,
)
from .store import Store

__version__ = "0.1.0"

__all__ = [
    "Benchmark",
    "BenchmarkInstance",
    "BlobRef",
    "EvalOutcome",
    "Experiment",
    "IngestState",
    "InstanceRecord",
    "InstanceStatus",
    "StatusGroup",
    "StepKind",
    "TrajectoryStep",
    "Store",
    "status_group",
    "__version__",
]
