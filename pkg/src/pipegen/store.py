"""Embedded file-backed document store with optimistic concurrency.

One JSON file per document under data_dir/<collection>/<id>.json. Writes go
through a compare-and-set on the stored revision; that check is the only
mutation-ordering mechanism in the system. Files are written atomically
(temp file + rename), so a crash never leaves a half-written document.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
import threading
import time
from dataclasses import dataclass
from pathlib import Path

_SAFE_ID_RE = re.compile(r"^[A-Za-z0-9_-]+$")


class NotFound(KeyError):
    def __init__(self, collection: str, doc_id: str):
        self.collection = collection
        self.doc_id = doc_id
        super().__init__(f"{collection}/{doc_id} does not exist")


class RevisionConflict(Exception):
    def __init__(self, collection: str, doc_id: str,
                 expected: int | None, current: int | None):
        self.collection = collection
        self.doc_id = doc_id
        self.expected = expected
        self.current = current
        super().__init__(
            f"{collection}/{doc_id}: expected revision {expected}, found {current}")


@dataclass
class StoredDocument:
    collection: str
    id: str
    revision: int
    body: dict
    updated_at: str


def _check_id(value: str, what: str) -> str:
    if not _SAFE_ID_RE.match(value):
        raise ValueError(f"unsafe {what} {value!r}")
    return value


class FileDocumentStore:
    """Document store over a directory tree; safe for concurrent threads."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()

    def _path(self, collection: str, doc_id: str) -> Path:
        return self.data_dir / _check_id(collection, "collection") / f"{_check_id(doc_id, 'id')}.json"

    def _read(self, path: Path, collection: str) -> StoredDocument:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
        return StoredDocument(collection=collection, id=raw["id"],
                              revision=raw["revision"], body=raw["body"],
                              updated_at=raw["updated_at"])

    def get(self, collection: str, doc_id: str) -> StoredDocument | None:
        path = self._path(collection, doc_id)
        with self._lock:
            if not path.exists():
                return None
            return self._read(path, collection)

    def put(self, collection: str, doc_id: str, body: dict,
            expected_revision: int | None) -> StoredDocument:
        """Write a document if the stored revision matches.

        expected_revision None means "create": the document must not exist.
        The new revision is taken from body["revision"].
        """
        path = self._path(collection, doc_id)
        with self._lock:
            current = self._read(path, collection) if path.exists() else None
            if expected_revision is None:
                if current is not None:
                    raise RevisionConflict(collection, doc_id, None, current.revision)
            else:
                if current is None:
                    raise NotFound(collection, doc_id)
                if current.revision != expected_revision:
                    raise RevisionConflict(collection, doc_id,
                                           expected_revision, current.revision)
            document = StoredDocument(
                collection=collection, id=doc_id,
                revision=int(body.get("revision", 1)), body=body,
                updated_at=time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            )
            payload = json.dumps(
                {"id": document.id, "revision": document.revision,
                 "body": document.body, "updated_at": document.updated_at},
                sort_keys=True, ensure_ascii=False, indent=2,
            )
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as handle:
                    handle.write(payload + "\n")
                os.replace(tmp_name, path)
            finally:
                if os.path.exists(tmp_name):
                    os.unlink(tmp_name)
            return document

    def delete(self, collection: str, doc_id: str) -> bool:
        path = self._path(collection, doc_id)
        with self._lock:
            if not path.exists():
                return False
            path.unlink()
            return True

    def scan(self, collection: str) -> list[StoredDocument]:
        directory = self.data_dir / _check_id(collection, "collection")
        with self._lock:
            if not directory.is_dir():
                return []
            documents = [self._read(p, collection)
                         for p in sorted(directory.glob("*.json"))]
            return documents
