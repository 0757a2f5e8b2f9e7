"""File-backed store of R_{n,d} certificates.

Entries carry a sha256 of their canonical JSON.  A read recomputes the hash
and replays the certificate; anything that fails either check is reported as
rejected and never returned.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional

from .search import RndCertificate, verify_certificate

CACHE_SCHEMA = "diagsos.cache/1"


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(canonical(obj).encode()).hexdigest()


class CacheError(Exception):
    pass


class ResultsCache:
    def __init__(self, path):
        self.path = Path(path)
        self.rejected: dict[str, str] = {}
        self._entries: dict[str, dict] = {}
        if self.path.exists():
            self._load()

    @staticmethod
    def key(n: int, d: int) -> str:
        return f"{n},{d}"

    def _load(self):
        try:
            raw = json.loads(self.path.read_text())
        except json.JSONDecodeError as exc:
            raise CacheError(f"{self.path}: not valid JSON ({exc})") from exc
        if raw.get("schema") != CACHE_SCHEMA:
            raise CacheError(f"{self.path}: unsupported cache schema {raw.get('schema')!r}")
        self._entries = dict(raw.get("entries", {}))

    def keys(self) -> list[str]:
        return sorted(self._entries)

    def get(self, n: int, d: int) -> Optional[RndCertificate]:
        k = self.key(n, d)
        entry = self._entries.get(k)
        if entry is None:
            return None
        cert_obj = entry.get("certificate")
        if entry.get("sha256") != digest(cert_obj):
            self.rejected[k] = "content hash mismatch"
            return None
        try:
            cert = RndCertificate.from_json(cert_obj)
        except (KeyError, TypeError, ValueError) as exc:
            self.rejected[k] = f"unreadable certificate: {exc}"
            return None
        if (cert.n, cert.d) != (n, d):
            self.rejected[k] = "entry is for a different (n, d)"
            return None
        ok, why = verify_certificate(cert, explain=True)
        if not ok:
            self.rejected[k] = f"certificate does not verify: {why}"
            return None
        return cert

    def put(self, cert: RndCertificate):
        obj = cert.to_json(timing=False)
        self._entries[self.key(cert.n, cert.d)] = {"sha256": digest(obj), "certificate": obj}
        self.save()

    def save(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        body = json.dumps({"schema": CACHE_SCHEMA, "entries": self._entries}, sort_keys=True, indent=1)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=".cache-")
        with os.fdopen(fd, "w") as fh:
            fh.write(body + "\n")
        os.replace(tmp, self.path)
