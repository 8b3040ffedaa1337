"""Read-mostly HTTP JSON service exposing the store and analyses.

Endpoints (all JSON; errors are ``{"code", "message"}`` bodies):

    GET  /api/benchmarks
    GET  /api/benchmarks/{bid}/experiments
    GET  /api/experiments/{eid}
    GET  /api/experiments/{eid}/instances?status=S&group=G&page=N
    GET  /api/experiments/{eid}/instances/{iid}
    GET  /api/compare?baseline=B&target=T
    GET  /api/compare/instance?baseline=B&target=T&id=I
    GET  /api/summarize?experiments=E1,E2,...
    GET  /api/blobs/{digest}
    POST /api/ingest/scan
    GET  /api/health

Ingestion is the sole writer; every endpoint except the scan trigger is
side-effect-free, so responses are trivially cacheable. Trajectory steps are
served paginated (default 200/page) because real trajectories can be enormous;
logs are never inlined, only blob download links.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Optional, Sequence

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import analysis
from .config import Config
from .errors import BadQuery, EmptySelection, SeaviewError
from .ingest import Poller
from .model import BlobRef, status_group
from .rules import SignatureRule, load_rules_or_default
from .store import Store

DEFAULT_PAGE_SIZE = 50
MAX_PAGE_SIZE = 500
DEFAULT_STEPS_PAGE_SIZE = 200

#: Closed set of machine-readable error codes served by the API.
ERROR_CODES = (
    "unknown_benchmark", "unknown_experiment", "unknown_instance", "blob_missing",
    "benchmark_mismatch", "experiment_not_ready", "empty_selection", "bad_query",
    "malformed_manifest", "malformed_report", "conflicting_report",
    "store_unavailable", "root_unreachable", "internal_error",
)


def _blob_link(ref: BlobRef) -> dict[str, Any]:
    return {**ref.to_dict(), "url": f"/api/blobs/{ref.digest}"}


def _paginate(items: list, page: int, page_size: int) -> list:
    if page < 1 or page_size < 1:
        raise BadQuery("page and page_size must be >= 1")
    start = (page - 1) * page_size
    return items[start:start + page_size]


def create_app(
    config: Optional[Config] = None,
    store: Optional[Store] = None,
    rules: Optional[Sequence[SignatureRule]] = None,
    start_poller: bool = False,
) -> FastAPI:
    config = config or Config.from_env()
    store = store or Store(config.store_path)
    rules = list(rules) if rules is not None else load_rules_or_default(store.root)

    poller: Optional[Poller] = None
    if config.data_root is not None:
        poller = Poller(config.data_root, store, rules, config.poll_interval_secs)

    app = FastAPI(title="seaview", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.poller = poller

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],  # the UI origin; this service is read-mostly and unauthenticated
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(SeaviewError)
    async def seaview_error_handler(request: Request, exc: SeaviewError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.http_status,
            content={"code": exc.code, "message": str(exc)},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content={"code": "bad_query", "message": str(exc.errors())},
        )

    if start_poller and poller is not None:
        @app.on_event("startup")
        def _start_poller() -> None:
            poller.start()

        @app.on_event("shutdown")
        def _stop_poller() -> None:
            poller.stop()

    @app.get("/api/benchmarks")
    def list_benchmarks() -> list[dict[str, Any]]:
        out = []
        for benchmark in store.list_benchmarks():
            out.append(
                {
                    "benchmark_id": benchmark.benchmark_id,
                    "name": benchmark.name,
                    "n_instances": len(benchmark.instances),
                    "n_experiments": len(store.list_experiments(benchmark.benchmark_id)),
                }
            )
        return out

    @app.get("/api/benchmarks/{bid}/experiments")
    def list_benchmark_experiments(bid: str) -> list[dict[str, Any]]:
        store.get_benchmark(bid)  # 404 on unknown id
        return [
            analysis.experiment_summary(store, e)
            for e in store.list_experiments(bid)
        ]

    @app.get("/api/experiments/{eid}")
    def experiment_detail(eid: str) -> dict[str, Any]:
        experiment = store.get_experiment(eid)
        return {
            "experiment": analysis.experiment_summary(store, experiment),
            "report": analysis.build_report(store, eid).to_dict(),
            "health": analysis.health_breakdown(store, eid).to_dict(),
            "warnings": store.experiment_warnings(eid),
        }

    @app.get("/api/experiments/{eid}/instances")
    def list_instances(
        eid: str,
        status: Optional[str] = None,
        group: Optional[str] = None,
        page: int = 1,
        page_size: int = DEFAULT_PAGE_SIZE,
    ) -> dict[str, Any]:
        if page_size > MAX_PAGE_SIZE:
            raise BadQuery(f"page_size must be <= {MAX_PAGE_SIZE}")
        items = analysis.instance_summaries(store, eid, status=status, group=group)
        return {
            "experiment_id": eid,
            "page": page,
            "page_size": page_size,
            "total": len(items),
            "items": _paginate(items, page, page_size),
        }

    @app.get("/api/experiments/{eid}/instances/{iid}")
    def instance_detail(
        eid: str,
        iid: str,
        steps_page: int = 1,
        steps_page_size: int = DEFAULT_STEPS_PAGE_SIZE,
    ) -> dict[str, Any]:
        record = store.get_record(eid, iid)
        experiment = store.get_experiment(eid)
        benchmark = store.get_benchmark(experiment.benchmark_id)
        instance = next(i for i in benchmark.instances if i.instance_id == iid)
        steps = store.load_trajectory(eid, iid)
        trajectory = None
        if steps is not None:
            page_steps = _paginate([s.to_dict() for s in steps], steps_page, steps_page_size)
            trajectory = {
                "steps": page_steps,
                "page": steps_page,
                "page_size": steps_page_size,
                "total_steps": len(steps),
            }
        return {
            "experiment_id": eid,
            "instance_id": iid,
            "status": record.status.value,
            "group": status_group(record.status).value,
            "problem_statement": instance.problem_statement,
            "gold_patch": instance.gold_patch,
            "patch": record.patch,
            "eval": record.eval.to_dict() if record.eval else None,
            "step_count": record.step_count,
            "trajectory": trajectory,
            "trajectory_blob": _blob_link(record.trajectory_ref) if record.trajectory_ref else None,
            "log_refs": [_blob_link(r) for r in record.log_refs],
        }

    @app.get("/api/compare")
    def compare(baseline: str, target: str) -> dict[str, Any]:
        return analysis.compare(store, baseline, target).to_dict()

    @app.get("/api/compare/instance")
    def compare_instance(baseline: str, target: str, id: str) -> dict[str, Any]:
        return analysis.compare_instance(store, baseline, target, id)

    @app.get("/api/summarize")
    def summarize(experiments: str = "") -> dict[str, Any]:
        ids = [e for e in experiments.split(",") if e]
        if not ids:
            raise EmptySelection("experiments query parameter is empty")
        return analysis.summarize(store, ids).to_dict()

    @app.get("/api/blobs/{digest}")
    def get_blob(digest: str) -> Response:
        data = store.blobs.get(digest)
        return Response(content=data, media_type="application/octet-stream")

    @app.post("/api/ingest/scan")
    def trigger_scan() -> dict[str, Any]:
        if poller is None:
            raise BadQuery("no upload root configured (SEAVIEW_DATA_ROOT)")
        status = poller.poll_once()
        if status.get("error"):
            # surfaced via /api/health as well; a failed poll is a 503
            return JSONResponse(
                status_code=503,
                content={"code": "root_unreachable", "message": status["error"]},
            )
        return {k: status[k] for k in ("discovered", "ingested", "failed")}

    @app.get("/api/health")
    def health() -> dict[str, Any]:
        return {
            "status": "ok",
            "store_path": str(store.root),
            "data_root": str(config.data_root) if config.data_root else None,
            "last_poll": poller.last_poll if poller else None,
        }

    if config.ui_dir is not None and Path(config.ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


def serve(config: Optional[Config] = None) -> None:
    """Run the service with the background poller; blocks until interrupted."""
    import uvicorn

    config = config or Config.from_env()
    app = create_app(config, start_poller=True)
    host, port = config.split_bind_addr()
    uvicorn.run(app, host=host, port=port, log_level="info")
