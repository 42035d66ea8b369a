"""Binary model container: magic "LLEM1", JSON header, float64 payload.

Layout: 5-byte magic, uint32 format version, uint64 header length, UTF-8 JSON
header, then the named parameter segments as little-endian 64-bit floats in
row-major order, concatenated in header order. The header carries the schema
hash, a section tag (model kind), encoder statistics and model metadata;
loading rejects a mismatched schema hash.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BadCheckpoint, SchemaHashMismatch

MAGIC = b"LLEM1"
FORMAT_VERSION = 1

SECTION_TAGS = (
    "mlp_classifier",
    "scarf_encoder",
    "scarf_classifier",
    "hierarchical_classifier",
    "decision_tree",
    "random_forest",
    "gbt",
)


@dataclass
class Checkpoint:
    section: str
    schema_hash: str
    encoder_meta: dict
    model_meta: dict
    arrays: dict[str, np.ndarray]


def save_checkpoint(
    path: str | Path,
    section: str,
    schema_hash: str,
    encoder_meta: dict,
    model_meta: dict,
    arrays: dict[str, np.ndarray] | None = None,
) -> None:
    if section not in SECTION_TAGS:
        raise BadCheckpoint(f"unknown section tag {section!r}")
    arrays = arrays or {}
    segments = [{"name": name, "shape": list(arr.shape)} for name, arr in arrays.items()]
    header = {
        "format_version": FORMAT_VERSION,
        "section": section,
        "schema_hash": schema_hash,
        "encoder": encoder_meta,
        "model": model_meta,
        "segments": segments,
    }
    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        fh.write(struct.pack("<Q", len(header_bytes)))
        fh.write(header_bytes)
        for seg in segments:
            arr = np.ascontiguousarray(arrays[seg["name"]], dtype="<f8")
            fh.write(arr.tobytes(order="C"))


def load_checkpoint(path: str | Path, expect_schema_hash: str | None = None) -> Checkpoint:
    path = Path(path)
    if not path.exists():
        raise BadCheckpoint(f"{path}: no such checkpoint file")
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise BadCheckpoint(f"{path}: bad magic {magic!r}, not a model container")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != FORMAT_VERSION:
            raise BadCheckpoint(f"{path}: unsupported format version {version}")
        (header_len,) = struct.unpack("<Q", fh.read(8))
        try:
            header = json.loads(fh.read(header_len).decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise BadCheckpoint(f"{path}: corrupt header: {exc}") from None
        arrays: dict[str, np.ndarray] = {}
        for seg in header.get("segments", []):
            shape = tuple(seg["shape"])
            count = int(np.prod(shape)) if shape else 1
            buf = fh.read(count * 8)
            if len(buf) != count * 8:
                raise BadCheckpoint(f"{path}: truncated segment {seg['name']!r}")
            arrays[seg["name"]] = np.frombuffer(buf, dtype="<f8").reshape(shape).copy()
    ckpt = Checkpoint(
        section=header["section"],
        schema_hash=header["schema_hash"],
        encoder_meta=header.get("encoder", {}),
        model_meta=header.get("model", {}),
        arrays=arrays,
    )
    if expect_schema_hash is not None and ckpt.schema_hash != expect_schema_hash:
        raise SchemaHashMismatch(
            f"{path}: checkpoint schema hash {ckpt.schema_hash[:12]}... does not match "
            f"expected {expect_schema_hash[:12]}..."
        )
    return ckpt
