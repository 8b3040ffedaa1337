"""Content-addressed blob store on the local filesystem.

Blobs live under ``<root>/<digest[:2]>/<digest>``; the digest is sha256 of the
content, so identical bytes are stored once and a ref uniquely identifies its
content. Writes go through a temp file + rename so readers never observe a
partial blob. A remote object-store backend is an extension point, not shipped.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path

from .errors import BlobMissing
from .model import BlobRef


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class BlobStore:
    def __init__(self, root: Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, digest: str) -> Path:
        return self.root / digest[:2] / digest

    def put(self, data: bytes, media_hint: str = "raw") -> BlobRef:
        digest = sha256_hex(data)
        path = self._path(digest)
        if not path.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
            try:
                with os.fdopen(fd, "wb") as f:
                    f.write(data)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        return BlobRef(digest=digest, size=len(data), media_hint=media_hint)

    def get(self, ref: BlobRef | str) -> bytes:
        digest = ref.digest if isinstance(ref, BlobRef) else ref
        path = self._path(digest)
        try:
            return path.read_bytes()
        except FileNotFoundError:
            raise BlobMissing(f"no blob with digest {digest}")

    def exists(self, digest: str) -> bool:
        return self._path(digest).exists()
