"""Exception hierarchy shared by parsers, store, analyses, API and CLI.

Every error carries a machine-readable ``code`` (the closed set served in API
error bodies), the HTTP status it maps to, and the CLI exit code class
(1 = user error, 2 = store/I-O error).
"""

from __future__ import annotations


class SeaviewError(Exception):
    code = "internal_error"
    http_status = 500
    exit_code = 2


class MalformedManifest(SeaviewError):
    code = "malformed_manifest"
    http_status = 422
    exit_code = 1


class MalformedTrajectory(SeaviewError):
    code = "malformed_trajectory"
    http_status = 422
    exit_code = 1


class MalformedReport(SeaviewError):
    code = "malformed_report"
    http_status = 422
    exit_code = 1


class ConflictingReport(SeaviewError):
    code = "conflicting_report"
    http_status = 422
    exit_code = 1


class MalformedBenchmark(SeaviewError):
    code = "malformed_benchmark"
    http_status = 422
    exit_code = 1


class NoAdapterFound(SeaviewError):
    code = "no_adapter_found"
    http_status = 422
    exit_code = 1


class InvalidRules(SeaviewError):
    code = "invalid_rules"
    http_status = 422
    exit_code = 1


class UnknownBenchmark(SeaviewError):
    code = "unknown_benchmark"
    http_status = 404
    exit_code = 1


class UnknownExperiment(SeaviewError):
    code = "unknown_experiment"
    http_status = 404
    exit_code = 1


class UnknownInstance(SeaviewError):
    code = "unknown_instance"
    http_status = 404
    exit_code = 1


class BlobMissing(SeaviewError):
    code = "blob_missing"
    http_status = 404
    exit_code = 2


class BenchmarkMismatch(SeaviewError):
    code = "benchmark_mismatch"
    http_status = 409
    exit_code = 1


class ExperimentNotReady(SeaviewError):
    code = "experiment_not_ready"
    http_status = 409
    exit_code = 1


class EmptySelection(SeaviewError):
    code = "empty_selection"
    http_status = 422
    exit_code = 1


class BadQuery(SeaviewError):
    code = "bad_query"
    http_status = 422
    exit_code = 1


class DuplicateBenchmark(SeaviewError):
    code = "duplicate_benchmark"
    http_status = 409
    exit_code = 1


class MissingConfig(SeaviewError):
    code = "missing_config"
    http_status = 422
    exit_code = 1


class StoreUnavailable(SeaviewError):
    code = "store_unavailable"
    http_status = 503
    exit_code = 2


class RootUnreachable(SeaviewError):
    code = "root_unreachable"
    http_status = 503
    exit_code = 2
