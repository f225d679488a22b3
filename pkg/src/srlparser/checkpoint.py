"""Binary checkpoint archive: versioned header, JSON metadata, raw tensors.

Layout (all integers little-endian):

    bytes 0..7    magic "SRLPCKPT"
    bytes 8..11   format version (uint32), currently 1
    bytes 12..19  metadata length in bytes (uint64)
    ...           metadata: UTF-8 JSON object; its "tensors" key lists
                  {"name": str, "shape": [int, ...]} in storage order
    ...           for each tensor, C-order float64 little-endian values

The metadata object also carries whatever the caller stores under other
keys (model configuration, vocabularies, parsing mode).
"""
from __future__ import annotations

import json
import struct

import numpy as np

MAGIC = b"SRLPCKPT"
VERSION = 1


class CheckpointError(ValueError):
    pass


def save_checkpoint(path: str, tensors: dict[str, np.ndarray], metadata: dict) -> None:
    meta = dict(metadata)
    meta["tensors"] = [{"name": name, "shape": list(array.shape)}
                       for name, array in tensors.items()]
    blob = json.dumps(meta, ensure_ascii=False).encode("utf-8")
    with open(path, "wb") as handle:
        handle.write(MAGIC)
        handle.write(struct.pack("<I", VERSION))
        handle.write(struct.pack("<Q", len(blob)))
        handle.write(blob)
        for array in tensors.values():
            handle.write(np.ascontiguousarray(array, dtype="<f8").tobytes())


def load_checkpoint(path: str) -> tuple[dict, dict[str, np.ndarray]]:
    with open(path, "rb") as handle:
        magic = handle.read(8)
        if magic != MAGIC:
            raise CheckpointError(f"{path}: not a checkpoint file (bad magic {magic!r})")
        (version,) = struct.unpack("<I", handle.read(4))
        if version != VERSION:
            raise CheckpointError(f"{path}: unsupported checkpoint version {version}")
        (meta_len,) = struct.unpack("<Q", handle.read(8))
        metadata = json.loads(handle.read(meta_len).decode("utf-8"))
        tensors: dict[str, np.ndarray] = {}
        for entry in metadata.pop("tensors"):
            shape = tuple(entry["shape"])
            count = int(np.prod(shape)) if shape else 1
            raw = handle.read(count * 8)
            if len(raw) != count * 8:
                raise CheckpointError(f"{path}: truncated tensor {entry['name']!r}")
            tensors[entry["name"]] = np.frombuffer(raw, dtype="<f8").reshape(shape).copy()
        trailing = handle.read(1)
        if trailing:
            raise CheckpointError(f"{path}: trailing bytes after the last tensor")
    return metadata, tensors
