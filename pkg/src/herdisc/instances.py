"""Instance files: canonical one-line JSON documents.

A set-system instance is ``{"n": ..., "sets": [[...], ...], "tags": [...], "meta": {...}}``
with 1-based elements, and a matrix instance is
``{"matrix": [[...], ...], "tags": [...], "meta": {...}}``; ``tags`` and
``meta`` are optional. The canonical text has sorted sets, this key order,
sorted meta keys and a trailing newline, so parse/serialize round-trips
bit-exactly.
"""
from __future__ import annotations

import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TextIO

from .core import InvalidInput, SetSystem


class InstanceError(InvalidInput):
    """Malformed instance file; the message names the offending location."""


@dataclass
class Instance:
    system: SetSystem | None = None
    matrix: list[list[int]] | None = None
    tags: list[int] | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return "sets" if self.system is not None else "matrix"

    def int_matrix(self) -> list[list[int]]:
        if self.matrix is not None:
            return self.matrix
        return self.system.incidence().tolist()


def _read_text(src) -> str:
    if isinstance(src, (str, Path)):
        if str(src) == "-":
            import sys
            return sys.stdin.read()
        return Path(src).read_text(encoding="utf-8")
    return src.read()


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InstanceError(f"{where}: expected an integer, got {x!r}")
    return x


def parse_document(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise InstanceError("top level: expected an object")
    unknown = set(doc) - {"n", "sets", "matrix", "tags", "meta"}
    if unknown:
        raise InstanceError(f"top level: unknown field(s) {sorted(unknown)}")
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise InstanceError("meta: expected an object")
    tags = doc.get("tags")
    if tags is not None:
        if not isinstance(tags, list):
            raise InstanceError("tags: expected a list")
        tags = [_int(t, f"tags[{i + 1}]") for i, t in enumerate(tags)]

    if "matrix" in doc:
        if "n" in doc or "sets" in doc:
            raise InstanceError("top level: 'matrix' excludes 'n' and 'sets'")
        rows = doc["matrix"]
        if not isinstance(rows, list) or not rows:
            raise InstanceError("matrix: expected a non-empty list of rows")
        width = None
        M = []
        for i, row in enumerate(rows, start=1):
            if not isinstance(row, list):
                raise InstanceError(f"matrix row {i}: expected a list")
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise InstanceError(f"matrix row {i}: length {len(row)}, expected {width}")
            M.append([_int(x, f"matrix row {i}, entry {j}") for j, x in enumerate(row, start=1)])
        if tags is not None and len(tags) != len(M):
            raise InstanceError(f"tags: {len(tags)} tags for {len(M)} rows")
        return Instance(matrix=M, tags=tags, meta=meta)

    if "n" not in doc or "sets" not in doc:
        raise InstanceError("top level: need 'n' and 'sets' (or 'matrix')")
    n = _int(doc["n"], "n")
    if n < 0:
        raise InstanceError("n: must be nonnegative")
    sets = doc["sets"]
    if not isinstance(sets, list):
        raise InstanceError("sets: expected a list")
    rows = []
    for i, s in enumerate(sets, start=1):
        if not isinstance(s, list):
            raise InstanceError(f"set {i}: expected a list")
        row = []
        for x in s:
            x = _int(x, f"set {i}")
            if not 1 <= x <= n:
                raise InstanceError(f"set {i}, element {x}: outside [1, {n}]")
            row.append(x)
        if len(set(row)) != len(row):
            raise InstanceError(f"set {i}: repeated element")
        rows.append(row)
    if tags is not None and len(tags) != len(rows):
        raise InstanceError(f"tags: {len(tags)} tags for {len(rows)} sets")
    return Instance(system=SetSystem(n, rows, tags), tags=tags, meta=meta)


def load_instance(src) -> Instance:
    text = _read_text(src)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    return parse_document(doc)


def parse_instance(src) -> SetSystem:
    """Read a set-system instance from a path, '-' (stdin) or an open text stream."""
    inst = load_instance(src)
    if inst.system is None:
        raise InstanceError("expected a set-system instance, found a matrix")
    return inst.system


def to_document(inst: Instance) -> dict:
    doc: dict[str, Any] = {}
    if inst.system is not None:
        doc["n"] = inst.system.n
        doc["sets"] = [list(s) for s in inst.system.sets]
        tags = inst.system.tags
    else:
        doc["matrix"] = [list(r) for r in inst.matrix]
        tags = inst.tags
    if tags is not None:
        doc["tags"] = list(tags)
    if inst.meta:
        doc["meta"] = {k: inst.meta[k] for k in sorted(inst.meta)}
    return doc


def dumps_canonical(doc: dict) -> str:
    return json.dumps(doc, separators=(", ", ": "), allow_nan=False) + "\n"


def serialize(inst: Instance | SetSystem, stream: TextIO | None = None) -> str:
    if isinstance(inst, SetSystem):
        inst = Instance(system=inst)
    text = dumps_canonical(to_document(inst))
    if stream is not None:
        stream.write(text)
    return text


def digest(inst: Instance) -> str:
    return hashlib.sha256(serialize(inst).encode()).hexdigest()


def loads(text: str) -> Instance:
    return load_instance(io.StringIO(text))
