#!/usr/bin/env python3
"""Export real API responses from the seed-7 fixture store for the UI tests.

The frontend parity suite intercepts fetch and replays these payloads, so
every number the UI renders is checked against what the API actually serves.
Regenerate after changing the API response shapes:

    python3 scripts/export_ui_fixtures.py
"""

from __future__ import annotations

import itertools
import json
import tempfile
from pathlib import Path
from urllib.parse import urlencode

from fastapi.testclient import TestClient

from seaview.api import create_app
from seaview.cli import _parse_benchmark_file
from seaview.config import Config
from seaview.fixtures import generate_corpus
from seaview.ingest import run_poll_cycle
from seaview.model import InstanceStatus, StatusGroup
from seaview.rules import default_rules
from seaview.store import Store

OUT_PATH = Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixtures" / "api-responses.json"


def canonical(path: str, params: dict[str, str] | None = None) -> str:
    if not params:
        return path
    return path + "?" + urlencode(sorted(params.items()))


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        corpus = Path(tmp) / "corpus"
        expected = generate_corpus(corpus, seed=7, experiments=3, instances=12)
        store = Store(Path(tmp) / "store")
        store.put_benchmark(_parse_benchmark_file(corpus / "fixture-lite.jsonl"))
        run_poll_cycle(corpus / "experiments", store, default_rules())
        client = TestClient(create_app(Config(store_path=store.root), store=store))

        eids = expected["experiment_ids"]
        iids = sorted(expected["statuses"][eids[0]])
        urls: list[str] = [
            canonical("/api/benchmarks"),
            canonical("/api/benchmarks/fixture-lite/experiments"),
        ]
        for eid in eids:
            urls.append(canonical(f"/api/experiments/{eid}"))
            urls.append(canonical(f"/api/experiments/{eid}/instances", {"page_size": "500"}))
            for group in StatusGroup:
                urls.append(canonical(
                    f"/api/experiments/{eid}/instances",
                    {"group": group.value, "page_size": "500"},
                ))
            for status in InstanceStatus:
                urls.append(canonical(
                    f"/api/experiments/{eid}/instances",
                    {"status": status.value, "page_size": "500"},
                ))
        for eid in eids[:2]:
            for iid in iids:
                urls.append(canonical(f"/api/experiments/{eid}/instances/{iid}"))
        for baseline, target in itertools.product(eids, repeat=2):
            urls.append(canonical("/api/compare", {"baseline": baseline, "target": target}))
        for iid in iids:
            urls.append(canonical(
                "/api/compare/instance",
                {"baseline": eids[0], "id": iid, "target": eids[1]},
            ))
        for n in (1, 2, 3):
            for combo in itertools.permutations(eids, n):
                urls.append(canonical("/api/summarize", {"experiments": ",".join(combo)}))

        responses = {}
        for url in urls:
            r = client.get(url)
            assert r.status_code == 200, (url, r.status_code, r.text)
            responses[url] = r.json()

        OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
        OUT_PATH.write_text(json.dumps(responses, indent=1, sort_keys=True) + "\n")
        print(f"wrote {len(responses)} responses to {OUT_PATH}")


if __name__ == "__main__":
    main()
