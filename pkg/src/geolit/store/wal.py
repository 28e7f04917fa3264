"""Write-ahead log and snapshot segments for the embedded stores.

Each store directory holds at most one live snapshot segment plus a WAL of
JSON records, one per line, each guarded by a CRC32 of its payload bytes.
Appends are flushed per record, so a killed process never loses acknowledged
records and a torn final line is detected and discarded on replay. Snapshot
segments are written to a temp file and atomically renamed; they start with
the magic header line ``GCE1``.
"""

from __future__ import annotations

import json
import os
import zlib
from pathlib import Path

from ..errors import StoreUnavailable

MAGIC = "GCE1"
SEGMENT_SUFFIX = ".gce"
WAL_NAME = "wal.log"


def _encode(record: dict) -> bytes:
    payload = json.dumps(record, separators=(",", ":"), ensure_ascii=False, sort_keys=True)
    data = payload.encode("utf-8")
    crc = zlib.crc32(data) & 0xFFFFFFFF
    return f"{crc:08x} ".encode("ascii") + data + b"\n"


def _decode(line: bytes) -> dict | None:
    """Decode one WAL line; None means torn/corrupt (stop replay there)."""
    if not line.endswith(b"\n"):
        return None
    body = line[:-1]
    if len(body) < 9 or body[8:9] != b" ":
        return None
    try:
        crc = int(body[:8], 16)
    except ValueError:
        return None
    data = body[9:]
    if zlib.crc32(data) & 0xFFFFFFFF != crc:
        return None
    try:
        return json.loads(data.decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError):
        return None


class LogDir:
    """One store's directory: a snapshot segment plus a WAL."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StoreUnavailable(f"cannot create {self.directory}: {exc}") from exc
        self.wal_path = self.directory / WAL_NAME
        self._wal_fh = None

    # --- snapshot ---------------------------------------------------------

    def _segments(self) -> list[Path]:
        return sorted(self.directory.glob(f"segment-*{SEGMENT_SUFFIX}"))

    def load_snapshot(self) -> dict | None:
        segments = self._segments()
        for path in reversed(segments):
            try:
                with open(path, encoding="utf-8") as fh:
                    header = fh.readline().strip()
                    if not header.startswith(MAGIC):
                        continue
                    return json.loads(fh.read())
            except (OSError, json.JSONDecodeError):
                continue
        return None

    def write_snapshot(self, state: dict) -> None:
        """Atomically persist `state` and truncate the WAL."""
        seq = 1
        segments = self._segments()
        if segments:
            seq = int(segments[-1].stem.split("-")[1]) + 1
        path = self.directory / f"segment-{seq:06d}{SEGMENT_SUFFIX}"
        tmp = path.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(f"{MAGIC} 1\n")
            json.dump(state, fh, separators=(",", ":"), ensure_ascii=False, sort_keys=True)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
        self.truncate_wal()
        for old in segments:
            old.unlink(missing_ok=True)

    # --- WAL ----------------------------------------------------------------

    def replay_wal(self) -> list[dict]:
        """Valid WAL records in order; a torn tail is trimmed off the file."""
        if not self.wal_path.exists():
            return []
        records: list[dict] = []
        valid_bytes = 0
        with open(self.wal_path, "rb") as fh:
            for line in fh:
                record = _decode(line)
                if record is None:
                    break
                records.append(record)
                valid_bytes += len(line)
        if valid_bytes < self.wal_path.stat().st_size:
            with open(self.wal_path, "rb+") as fh:
                fh.truncate(valid_bytes)
        return records

    def append(self, record: dict) -> None:
        if self._wal_fh is None:
            try:
                self._wal_fh = open(self.wal_path, "ab")
            except OSError as exc:
                raise StoreUnavailable(f"cannot open WAL {self.wal_path}: {exc}") from exc
        self._wal_fh.write(_encode(record))
        self._wal_fh.flush()

    def truncate_wal(self) -> None:
        if self._wal_fh is not None:
            self._wal_fh.close()
            self._wal_fh = None
        with open(self.wal_path, "wb"):
            pass

    def sync(self) -> None:
        if self._wal_fh is not None:
            self._wal_fh.flush()
            os.fsync(self._wal_fh.fileno())

    def close(self) -> None:
        if self._wal_fh is not None:
            self._wal_fh.flush()
            os.fsync(self._wal_fh.fileno())
            self._wal_fh.close()
            self._wal_fh = None
