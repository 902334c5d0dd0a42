"""JSON instance files.

A file holds one problem instance:

    {
      "n": 4, "m": 4,
      "K": [[[w,x,y,z], ...], ...],      # n rows of n quaternion 4-arrays
      "F": [...],                        # n rows of m quaternion 4-arrays
      "G": [...],                        # optional, n rows of m
      "metadata": {"seed": 1, "rankK": 3, "kind": "exact-dual", ...}
    }

Every scalar is a 4-array [w, x, y, z] of finite decimals.  Parse failures
raise InstanceFileError with a stable diagnostic code and a location string
("K[2][1]" style) so broken fixtures are findable without a debugger.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from . import qlinalg as qla
from .frames import FrameSystem
from .qlinalg import QMatrix
from .verify import KINDS, Instance


class InstanceFileError(ValueError):
    """Malformed instance file; `code` is one of the stable diagnostics."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"[{code}] {message}")


def quaternion_entry(value, where: str) -> list:
    if not isinstance(value, list) or len(value) != 4:
        raise InstanceFileError(
            "bad-scalar", f"{where}: expected a 4-array [w, x, y, z], got {value!r}"
        )
    out = []
    for comp in value:
        if isinstance(comp, bool) or not isinstance(comp, (int, float)):
            raise InstanceFileError("bad-scalar", f"{where}: non-numeric component {comp!r}")
        comp = float(comp)
        if not math.isfinite(comp):
            raise InstanceFileError("non-finite", f"{where}: component {comp!r} is not finite")
        out.append(comp)
    return out


def nested_to_qmatrix(data, where: str, shape: tuple) -> QMatrix:
    n, m = shape
    if not isinstance(data, list):
        raise InstanceFileError("bad-type", f"{where}: expected a list of rows")
    if len(data) != n:
        raise InstanceFileError("bad-shape", f"{where}: expected {n} rows, found {len(data)}")
    comp = []
    width = None
    for i, row in enumerate(data):
        if not isinstance(row, list):
            raise InstanceFileError("bad-type", f"{where}[{i}]: expected a list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise InstanceFileError(
                "ragged-rows",
                f"{where}[{i}]: row has {len(row)} entries, earlier rows have {width}",
            )
        comp.append([quaternion_entry(entry, f"{where}[{i}][{j}]")
                     for j, entry in enumerate(row)])
    if width != m:
        raise InstanceFileError("bad-shape", f"{where}: expected {m} columns, found {width}")
    return QMatrix.from_components(comp)


def qmatrix_to_nested(m: QMatrix) -> list:
    comp = m.to_components()
    return [[list(map(float, comp[i, j])) for j in range(m.ncols)] for i in range(m.nrows)]


def _require(doc: dict, key: str):
    if key not in doc:
        raise InstanceFileError("missing-field", f"top-level field {key!r} is required")
    return doc[key]


def instance_to_dict(inst: Instance) -> dict:
    doc = {
        "n": inst.n,
        "m": inst.m,
        "K": qmatrix_to_nested(inst.k),
        "F": qmatrix_to_nested(inst.f.matrix),
    }
    if inst.g is not None:
        doc["G"] = qmatrix_to_nested(inst.g.matrix)
    doc["metadata"] = {k: v for k, v in inst.meta().items() if v is not None}
    return doc


def instance_from_dict(doc) -> Instance:
    if not isinstance(doc, dict):
        raise InstanceFileError("bad-type", "top level must be a JSON object")
    n = _require(doc, "n")
    m = _require(doc, "m")
    for name, val in (("n", n), ("m", m)):
        if isinstance(val, bool) or not isinstance(val, int) or val < 1:
            raise InstanceFileError("bad-type", f"{name} must be a positive integer")
    k = nested_to_qmatrix(_require(doc, "K"), "K", (n, n))
    f = nested_to_qmatrix(_require(doc, "F"), "F", (n, m))
    g = None
    if "G" in doc and doc["G"] is not None:
        g = nested_to_qmatrix(doc["G"], "G", (n, m))
    meta = doc.get("metadata") or {}
    if not isinstance(meta, dict):
        raise InstanceFileError("bad-type", "metadata must be an object")
    kind = meta.get("kind")
    if kind is not None and kind not in KINDS:
        raise InstanceFileError("bad-type", f"metadata.kind must be one of {KINDS}")
    rank_k = meta.get("rankK")
    if rank_k is None:
        rank_k = qla.svd(k).rank
    return Instance(
        seed=meta.get("seed"),
        n=n,
        m=m,
        rank_k=int(rank_k),
        kind=kind,
        k=k,
        f=FrameSystem(f),
        g=FrameSystem(g) if g is not None else None,
    )


def parse_instance_file(path) -> Instance:
    """Load and validate one instance file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFileError(
            "bad-json", f"{path}: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc
    return instance_from_dict(doc)


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=2) + "\n",
                          encoding="utf-8")
