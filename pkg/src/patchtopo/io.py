"""I/O for volumes, masks, point clouds, barcodes, and feature tables.

Volumes live in a raw+JSON container: a JSON sidecar header with keys
``dims`` ([nz, ny, nx]), ``spacing`` ([sz, sy, sx] in mm), ``dtype``
("f32" or "i16"), and ``data`` (raw-file path relative to the header).
The raw file is little-endian, row-major. All text tables are CSV with
floats written via ``repr`` so that save/load round-trips are bit-exact.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataError

_DTYPES = {"f32": np.dtype("<f4"), "i16": np.dtype("<i2")}


@dataclass
class Volume:
    """A 3D scalar grid with voxel spacing metadata.

    ``data`` is a float32 array of shape ``dims`` = (nz, ny, nx);
    ``spacing`` is (sz, sy, sx) in mm. Instances are treated as immutable.
    """

    data: np.ndarray
    spacing: tuple[float, float, float]

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=np.float32)
        if self.data.ndim != 3:
            raise DataError(f"volume data must be 3D, got shape {self.data.shape}")
        self.spacing = tuple(float(s) for s in self.spacing)
        if len(self.spacing) != 3 or any(s <= 0 for s in self.spacing):
            raise DataError(f"spacing must be 3 positive values, got {self.spacing}")
        if np.isnan(self.data).any():
            raise DataError("volume contains NaN values")

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.data.shape


@dataclass
class Mask:
    """A binary ROI mask; same shape as its paired :class:`Volume`."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data)
        if arr.ndim != 3:
            raise DataError(f"mask data must be 3D, got shape {arr.shape}")
        vals = np.unique(arr)
        if not np.isin(vals, (0, 1)).all():
            raise DataError(f"mask values must be 0 or 1, found {vals[:8]}")
        self.data = arr.astype(np.uint8)

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.data.shape


def _read_header(path: Path) -> tuple[dict, Path]:
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    try:
        header = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise DataError(f"malformed volume header {path}: {e}") from e
    for key in ("dims", "spacing", "dtype", "data"):
        if key not in header:
            raise DataError(f"volume header {path} missing key '{key}'")
    raw_path = path.parent / header["data"]
    if not raw_path.is_file():
        raise DataError(f"raw data file not found: {raw_path}")
    return header, raw_path


def _load_array(path: str | Path) -> tuple[np.ndarray, tuple[float, float, float]]:
    header, raw_path = _read_header(Path(path))
    dims = tuple(int(d) for d in header["dims"])
    if len(dims) != 3 or any(d <= 0 for d in dims):
        raise DataError(f"dims must be 3 positive integers, got {header['dims']}")
    dtype = _DTYPES.get(header["dtype"])
    if dtype is None:
        raise DataError(f"unknown dtype '{header['dtype']}' (expected f32 or i16)")
    raw = np.fromfile(raw_path, dtype=dtype)
    n = int(np.prod(dims))
    if raw.size != n:
        raise DataError(
            f"{raw_path}: expected {n} samples for dims {dims}, found {raw.size}"
        )
    data = raw.astype(np.float32).reshape(dims)
    if np.isnan(data).any():
        raise DataError(f"{raw_path}: NaN values present")
    return data, tuple(float(s) for s in header["spacing"])


def load_volume(path: str | Path) -> Volume:
    """Load a volume from its JSON header; i16 payloads widen to float32."""
    data, spacing = _load_array(path)
    return Volume(data=data, spacing=spacing)


def load_mask(path: str | Path) -> Mask:
    """Load a binary mask stored in the same raw+JSON container."""
    data, _ = _load_array(path)
    return Mask(data=data)


def save_volume(v: Volume, path: str | Path, dtype: str = "f32") -> None:
    """Write header JSON at ``path`` and the raw payload next to it."""
    path = Path(path)
    if dtype not in _DTYPES:
        raise DataError(f"unknown dtype '{dtype}'")
    raw_name = path.stem + ".raw"
    header = {
        "dims": [int(d) for d in v.dims],
        "spacing": [float(s) for s in v.spacing],
        "dtype": dtype,
        "data": raw_name,
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(header, indent=2) + "\n")
    v.data.astype(_DTYPES[dtype]).tofile(path.parent / raw_name)


def save_mask(m: Mask, path: str | Path, spacing=(1.0, 1.0, 1.0)) -> None:
    path = Path(path)
    raw_name = path.stem + ".raw"
    header = {
        "dims": [int(d) for d in m.dims],
        "spacing": [float(s) for s in spacing],
        "dtype": "i16",
        "data": raw_name,
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(header, indent=2) + "\n")
    m.data.astype("<i2").tofile(path.parent / raw_name)


def _fmt(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def save_barcode(barcodes, path: str | Path) -> None:
    """Write barcodes as CSV ``dim,birth,death`` with ``inf`` for essentials.

    ``barcodes`` is a sequence of :class:`patchtopo.persistence.Barcode`;
    multiplicity is written as repeated rows.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["dim,birth,death"]
    for bc in barcodes:
        for birth, death in bc.bars:
            lines.append(f"{bc.dim},{_fmt(birth)},{_fmt(death)}")
    path.write_text("\n".join(lines) + "\n")


def load_barcode(path: str | Path, max_dim: int = 2):
    """Read a barcode CSV back into one Barcode per dimension 0..max_dim."""
    from .persistence import Barcode

    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    bars: dict[int, list[tuple[float, float]]] = {d: [] for d in range(max_dim + 1)}
    with path.open() as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["dim", "birth", "death"]:
            raise DataError(f"{path}: expected header 'dim,birth,death', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                dim = int(row[0])
                birth = float(row[1])
                death = float(row[2])
            except (ValueError, IndexError) as e:
                raise DataError(f"{path}:{lineno}: malformed row {row}") from e
            if death < birth:
                raise DataError(f"{path}:{lineno}: death {death} < birth {birth}")
            if dim not in bars:
                raise DataError(f"{path}:{lineno}: dimension {dim} out of range")
            bars[dim].append((birth, death))
    return tuple(Barcode(dim=d, bars=np.array(bars[d]).reshape(-1, 2)) for d in range(max_dim + 1))


def save_features(rows: Sequence[tuple[str, np.ndarray, object]], path: str | Path,
                  names: Sequence[str] | None = None) -> None:
    """Write one CSV row per (sample id, feature vector, label) triple."""
    from .features import FEATURE_NAMES

    if names is None:
        names = FEATURE_NAMES
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["id," + ",".join(names) + ",label"]
    for sample_id, vec, label in rows:
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (len(names),):
            raise DataError(
                f"feature vector for '{sample_id}' has length {vec.size}, expected {len(names)}"
            )
        lines.append(",".join([str(sample_id)] + [_fmt(x) for x in vec] + [str(label)]))
    path.write_text("\n".join(lines) + "\n")


def load_features(path: str | Path) -> tuple[list[str], np.ndarray, list[str], list[str]]:
    """Read a feature CSV; returns (ids, matrix, labels, feature names)."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open() as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "id" or header[-1] != "label":
            raise DataError(f"{path}: expected 'id,...,label' header")
        names = header[1:-1]
        ids, vecs, labels = [], [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}")
            ids.append(row[0])
            try:
                vecs.append([float(x) for x in row[1:-1]])
            except ValueError as e:
                raise DataError(f"{path}:{lineno}: non-numeric feature value") from e
            labels.append(row[-1])
    mat = np.array(vecs, dtype=np.float64).reshape(len(ids), len(names))
    return ids, mat, labels, names


def save_point_cloud(points: np.ndarray, path: str | Path) -> None:
    """Write an N x d point cloud as CSV with columns x0..x{d-1}."""
    points = np.asarray(points, dtype=np.float64)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(f"x{i}" for i in range(points.shape[1]))]
    for row in points:
        lines.append(",".join(_fmt(x) for x in row))
    path.write_text("\n".join(lines) + "\n")


def load_point_cloud(path: str | Path) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open() as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header != [f"x{i}" for i in range(len(header))]:
            raise DataError(f"{path}: expected point-cloud header x0,...,x{{d-1}}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(f"{path}:{lineno}: ragged row")
            try:
                rows.append([float(x) for x in row])
            except ValueError as e:
                raise DataError(f"{path}:{lineno}: non-numeric coordinate") from e
    if not rows:
        raise DataError(f"{path}: empty point cloud")
    return np.array(rows, dtype=np.float64)
