"""Append-only JSONL persistence: key/value caches with compaction, and run
journals that let an interrupted computation pick up where it stopped."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
from pathlib import Path
from typing import Callable

from .arith import Factorization
from .classgroup.structure import AbelianGroupStructure

__all__ = [
    "SCHEMA_VERSION",
    "JsonlStore",
    "factor_store",
    "structure_store",
    "RunJournal",
    "config_hash",
    "cache_dir",
]

SCHEMA_VERSION = 1
CACHE_ENV = "HILBQUAD_CACHE_DIR"
log = logging.getLogger(__name__)


def cache_dir(override: str | None = None) -> Path | None:
    path = override or os.environ.get(CACHE_ENV)
    if not path:
        return None
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _read_lines(path: Path):
    """Parsed JSON objects; a torn final line (crash mid-append) is skipped."""
    if not path.exists():
        return
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError:
                log.warning("%s:%d: skipping unreadable line", path, lineno)


class JsonlStore:
    """Integer-keyed cache persisted as {"v", "key", "payload"} lines.

    `decode` turns a payload into a value and raises if it fails its
    invariants; such entries are dropped on load.
    """

    def __init__(self, path, encode: Callable, decode: Callable):
        self.path = Path(path)
        self.encode = encode
        self.decode = decode
        self._data: dict[int, object] = {}
        self._lock = threading.Lock()
        self.dropped = 0
        for obj in _read_lines(self.path):
            try:
                if obj.get("v") != SCHEMA_VERSION:
                    raise ValueError("schema version mismatch")
                key = int(obj["key"])
                self._data[key] = self.decode(key, obj["payload"])
            except (KeyError, ValueError, TypeError) as exc:
                self.dropped += 1
                log.warning("dropping cache entry in %s: %s", self.path, exc)

    def __len__(self):
        return len(self._data)

    def get(self, key: int):
        return self._data.get(int(key))

    def put(self, key: int, value) -> None:
        key = int(key)
        with self._lock:
            if key in self._data:
                return
            self._data[key] = value
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(self._line(key, value))

    def _line(self, key: int, value) -> str:
        return json.dumps({"v": SCHEMA_VERSION, "key": key, "payload": self.encode(value)}, sort_keys=True) + "\n"

    def compact(self) -> None:
        """Rewrite the journal with one line per key, sorted by key."""
        with self._lock:
            tmp = self.path.with_suffix(self.path.suffix + ".tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                for key in sorted(self._data):
                    fh.write(self._line(key, self._data[key]))
            os.replace(tmp, self.path)


def _decode_factorization(key: int, payload) -> Factorization:
    fac = Factorization.from_json(payload)
    fac.check(key)
    return fac


def factor_store(path) -> JsonlStore:
    return JsonlStore(path, Factorization.to_json, _decode_factorization)


def _decode_structure(key: int, payload) -> AbelianGroupStructure:
    G = AbelianGroupStructure(tuple(int(x) for x in payload["divisors"]))
    if "order" in payload and int(payload["order"]) != G.order:
        raise ValueError("stored order disagrees with the invariant factors")
    return G


def structure_store(path) -> JsonlStore:
    return JsonlStore(path, lambda G: G.to_dict(), _decode_structure)


def config_hash(obj: dict) -> str:
    blob = json.dumps(obj, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


class RunJournal:
    """Completed work units of one run, keyed by unit id.

    The first line records the config hash; a journal written under a
    different configuration is discarded rather than mixed in.
    """

    def __init__(self, path, chash: str):
        self.path = Path(path)
        self.chash = chash
        self.units: dict = {}
        lines = list(_read_lines(self.path))
        if lines and lines[0].get("config_hash") == chash:
            for obj in lines[1:]:
                if "unit" in obj:
                    self.units[self._key(obj["unit"])] = obj["data"]
        else:
            if lines:
                log.warning("journal %s belongs to another configuration; starting over", self.path)
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(json.dumps({"config_hash": chash, "v": SCHEMA_VERSION}) + "\n")

    @staticmethod
    def _key(unit):
        return json.dumps(unit, sort_keys=True)

    def done(self, unit) -> bool:
        return self._key(unit) in self.units

    def get(self, unit):
        return self.units.get(self._key(unit))

    def record(self, unit, data) -> None:
        self.units[self._key(unit)] = data
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps({"unit": unit, "data": data}, sort_keys=True) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
