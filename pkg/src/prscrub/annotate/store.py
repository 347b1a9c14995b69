"""Append-only judgment store.

Human labels are the most expensive artifact in the protocol, so every
line carries a checksum: one JSON object per line of the form
{"record": {...}, "sha256": "..."} where the digest covers the record's
canonical serialization. A torn final line (crash mid-append, no
trailing newline) is recovered by truncating the unacknowledged tail; a
corrupt complete line means the file was edited and the store refuses
to load.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

STAGE1_KIND = "stage1_rating"
STAGE2_KIND = "stage2_label"


class CorruptStore(Exception):
    pass


class ConflictingRecord(Exception):
    """Same logical key resubmitted with a different payload."""


def canonical_record(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def record_digest(record: dict) -> str:
    return hashlib.sha256(canonical_record(record).encode("utf-8")).hexdigest()


def record_key(record: dict) -> tuple:
    kind = record["kind"]
    if kind == STAGE1_KIND:
        return (kind, record["sample_id"], record["rater_id"], record["arm"])
    if kind == STAGE2_KIND:
        return (kind, record["sample_id"], record["heuristic"], record["rater_id"])
    raise ValueError(f"unknown record kind {kind!r}")


def _payload(record: dict) -> dict:
    return {k: v for k, v in record.items() if k != "timestamp"}


class JudgmentStore:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.records: dict[tuple, dict] = {}
        self._load()
        self._fh = open(self.path, "a", encoding="utf-8", newline="\n")

    def _load(self) -> None:
        if not self.path.exists():
            return
        raw = self.path.read_bytes()
        if not raw:
            return
        text = raw.decode("utf-8")
        complete, _, tail = text.rpartition("\n")
        lines = complete.split("\n") if complete else []
        for line_no, line in enumerate(lines, start=1):
            self._load_line(line, line_no)
        if tail:
            # Unterminated tail: the append never completed, so it was
            # never acknowledged. Drop it and continue from the last
            # good record.
            with open(self.path, "rb+") as fh:
                fh.truncate(len(raw) - len(tail.encode("utf-8")))

    def _load_line(self, line: str, line_no: int) -> None:
        try:
            entry = json.loads(line)
            record = entry["record"]
            digest = entry["sha256"]
        except (json.JSONDecodeError, TypeError, KeyError):
            raise CorruptStore(f"{self.path}:{line_no}: unreadable entry") from None
        if record_digest(record) != digest:
            raise CorruptStore(f"{self.path}:{line_no}: checksum mismatch")
        key = record_key(record)
        if key in self.records:
            # Replayed identical line (e.g. copied store); tolerate only
            # exact duplicates.
            if _payload(self.records[key]) != _payload(record):
                raise CorruptStore(f"{self.path}:{line_no}: conflicting duplicate key {key}")
            return
        self.records[key] = record

    def append(self, record: dict) -> str:
        """Persist one judgment before acknowledging it.

        Returns "stored" for a new key and "duplicate" for an identical
        resubmission; a resubmission that changes the payload raises.
        """
        key = record_key(record)
        existing = self.records.get(key)
        if existing is not None:
            if _payload(existing) == _payload(record):
                return "duplicate"
            raise ConflictingRecord(f"key {key} already stored with different values")
        entry = {"record": record, "sha256": record_digest(record)}
        self._fh.write(json.dumps(entry, ensure_ascii=False, sort_keys=True))
        self._fh.write("\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())
        self.records[key] = record
        return "stored"

    def by_kind(self, kind: str) -> list[dict]:
        return [r for r in self.records.values() if r["kind"] == kind]

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
