"""On-disk formats: raw grid files and pyramid directories."""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import DimensionError
from .mask import Index
from .system import nu_key, parse_nu_key
from .transform import Pyramid

MAGIC = b"CSWG"
VERSION = 1
MANIFEST = "manifest.json"


class FormatError(ValueError):
    """A grid file or pyramid container is malformed."""


def write_grid(path, values: np.ndarray) -> None:
    arr = np.asarray(values)
    if arr.dtype == object:
        arr = arr.astype(float)
    arr = np.ascontiguousarray(arr, dtype="<f8")
    header = MAGIC + struct.pack("<II", VERSION, arr.ndim)
    header += struct.pack(f"<{arr.ndim}Q", *arr.shape)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(arr.tobytes())


def read_grid(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise FormatError(f"{path}: not a grid file (bad magic)")
    if len(data) < 12:
        raise FormatError(f"{path}: truncated header")
    version, dim = struct.unpack_from("<II", data, 4)
    if version != VERSION:
        raise FormatError(f"{path}: unsupported grid version {version}")
    if dim < 1:
        raise FormatError(f"{path}: dimension must be positive")
    offset = 12 + 8 * dim
    if len(data) < offset:
        raise FormatError(f"{path}: truncated header")
    shape = struct.unpack_from(f"<{dim}Q", data, 12)
    if any(s < 1 for s in shape):
        raise FormatError(f"{path}: axis sizes must be positive")
    count = int(np.prod(shape))
    if len(data) != offset + 8 * count:
        raise FormatError(f"{path}: payload size does not match shape {shape}")
    return np.frombuffer(data, dtype="<f8", offset=offset).reshape(shape).astype(float)


def _detail_name(j: int, nu: Index) -> str:
    return f"w_{j}_{nu_key(nu)}.bin"


def write_pyramid(directory, p: Pyramid) -> None:
    p.validate()
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    write_grid(out / "coarse.bin", p.coarse)
    for (j, nu), band in sorted(p.detail.items()):
        write_grid(out / _detail_name(j, nu), band)
    for j, band in sorted(p.aux.items()):
        write_grid(out / f"a_{j}.bin", band)
    manifest = {
        "levels": p.levels,
        "system-id": p.system_id,
        "method": p.method,
        "shapes": p.shapes(),
    }
    (out / MANIFEST).write_text(json.dumps(manifest, indent=2) + "\n")


def read_manifest(directory) -> dict:
    path = Path(directory) / MANIFEST
    try:
        return json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise FormatError(f"{directory}: missing {MANIFEST}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def read_pyramid(directory) -> Pyramid:
    root = Path(directory)
    manifest = read_manifest(root)
    try:
        levels = int(manifest["levels"])
        method = manifest["method"]
        sid = manifest["system-id"]
    except KeyError as exc:
        raise FormatError(f"manifest lacks {exc}") from None
    coarse = read_grid(root / "coarse.bin")
    detail, aux = {}, {}
    for f in root.glob("w_*_*.bin"):
        _, j, key = f.stem.split("_", 2)
        detail[(int(j), parse_nu_key(key))] = read_grid(f)
    for f in root.glob("a_*.bin"):
        aux[int(f.stem.split("_", 1)[1])] = read_grid(f)
    p = Pyramid(levels, coarse, detail, aux, sid, method)
    try:
        p.validate()
    except DimensionError as exc:
        raise FormatError(f"{directory}: {exc}") from exc
    return p
