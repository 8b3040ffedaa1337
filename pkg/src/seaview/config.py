"""Environment-variable configuration shared by the CLI and the API service."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

ENV_DATA_ROOT = "SEAVIEW_DATA_ROOT"
ENV_STORE_PATH = "SEAVIEW_STORE_PATH"
ENV_POLL_INTERVAL = "SEAVIEW_POLL_INTERVAL_SECS"
ENV_BIND_ADDR = "SEAVIEW_BIND_ADDR"
ENV_UI_DIR = "SEAVIEW_UI_DIR"

DEFAULT_STORE_PATH = "seaview-store"
DEFAULT_BIND_ADDR = "127.0.0.1:8080"
DEFAULT_POLL_INTERVAL_SECS = 30.0


@dataclass
class Config:
    store_path: Path
    data_root: Optional[Path] = None
    poll_interval_secs: float = DEFAULT_POLL_INTERVAL_SECS
    bind_addr: str = DEFAULT_BIND_ADDR
    ui_dir: Optional[Path] = None

    @classmethod
    def from_env(cls, environ: Optional[dict[str, str]] = None) -> "Config":
        env = os.environ if environ is None else environ
        data_root = env.get(ENV_DATA_ROOT)
        ui_dir = env.get(ENV_UI_DIR)
        return cls(
            store_path=Path(env.get(ENV_STORE_PATH, DEFAULT_STORE_PATH)),
            data_root=Path(data_root) if data_root else None,
            poll_interval_secs=float(env.get(ENV_POLL_INTERVAL, DEFAULT_POLL_INTERVAL_SECS)),
            bind_addr=env.get(ENV_BIND_ADDR, DEFAULT_BIND_ADDR),
            ui_dir=Path(ui_dir) if ui_dir else None,
        )

    def split_bind_addr(self) -> tuple[str, int]:
        host, _, port = self.bind_addr.rpartition(":")
        return host or "127.0.0.1", int(port)
