"""Patch-to-point conversion: cubic tiling, Morton coordinate encoding,
and statistical or PCA intensity encoding of patch contents."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats as sstats

from .errors import DataError, NumericalError
from .io import Mask, Volume

#: Statistic names accepted by :func:`patch_stats`, in canonical order.
STAT_NAMES = (
    "mean",
    "median",
    "mode",
    "std",
    "iqr",
    "entropy",
    "range",
    "min",
    "max",
)

PATCH_SIZES = tuple(range(3, 11))

_MORTON_BITS = 21
_ENTROPY_BINS = 32


@dataclass
class PatchConfig:
    """How to turn cubic patches into points.

    ``encoder`` is either ``("stats", [name, ...])`` with 2 or 3 names from
    :data:`STAT_NAMES`, or ``("pca", k)``. Axis min-max normalization is on
    by default: the Morton axis is orders of magnitude wider than intensity
    statistics and would otherwise dominate the alpha filtration.
    """

    patch_size: int
    encoder: tuple = ("stats", ("mean", "std"))
    normalize_axes: bool = True

    def __post_init__(self):
        if self.patch_size not in PATCH_SIZES:
            raise DataError(f"patch size must be in {list(PATCH_SIZES)}, got {self.patch_size}")
        kind = self.encoder[0]
        if kind == "stats":
            names = tuple(self.encoder[1])
            if len(names) not in (2, 3):
                raise DataError(f"stats encoder takes 2 or 3 names, got {len(names)}")
            for name in names:
                if name not in STAT_NAMES:
                    raise DataError(f"unknown stat '{name}'")
            self.encoder = ("stats", names)
        elif kind == "pca":
            k = int(self.encoder[1])
            if k != 3:
                raise DataError("PCA encoder is fixed to 3 components (d = 4)")
            self.encoder = ("pca", k)
        else:
            raise DataError(f"unknown encoder kind '{kind}'")

    @property
    def dim(self) -> int:
        """Point dimension: 1 Morton axis + one axis per intensity feature."""
        if self.encoder[0] == "stats":
            return 1 + len(self.encoder[1])
        return 1 + self.encoder[1]

    def describe(self) -> str:
        if self.encoder[0] == "stats":
            return f"n={self.patch_size} stats=[{','.join(self.encoder[1])}]"
        return f"n={self.patch_size} pca={self.encoder[1]}"


@dataclass
class Patch:
    """One cubic tile: flattened voxel values and its center voxel index."""

    values: np.ndarray
    center: tuple[int, int, int]


@dataclass
class PointCloud:
    """N x d point array; axis 0 is always the Morton coordinate axis."""

    points: np.ndarray
    config: PatchConfig | None = None

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def morton_encode(x: int, y: int, z: int) -> int:
    """Interleave three 21-bit coordinates into one integer.

    Bit i of x lands at output bit 3i, y at 3i+1, z at 3i+2, so x is the
    least significant of the three.
    """
    code = 0
    for name, c, shift in (("x", x, 0), ("y", y, 1), ("z", z, 2)):
        c = int(c)
        if c < 0 or c >= 1 << _MORTON_BITS:
            raise DataError(f"{name}={c} outside [0, 2^{_MORTON_BITS})")
        code |= _spread_bits(c) << shift
    return code


def morton_decode(code: int) -> tuple[int, int, int]:
    """Inverse of :func:`morton_encode`."""
    code = int(code)
    if code < 0 or code >= 1 << (3 * _MORTON_BITS):
        raise DataError(f"code {code} outside [0, 2^{3 * _MORTON_BITS})")
    return _compact_bits(code), _compact_bits(code >> 1), _compact_bits(code >> 2)


def _spread_bits(n: int) -> int:
    # spaces the low 21 bits of n three apart (64-bit magic constants)
    n &= 0x1FFFFF
    n = (n | (n << 32)) & 0x1F00000000FFFF
    n = (n | (n << 16)) & 0x1F0000FF0000FF
    n = (n | (n << 8)) & 0x100F00F00F00F00F
    n = (n | (n << 4)) & 0x10C30C30C30C30C3
    n = (n | (n << 2)) & 0x1249249249249249
    return n


def _compact_bits(n: int) -> int:
    n &= 0x1249249249249249
    n = (n ^ (n >> 2)) & 0x10C30C30C30C30C3
    n = (n ^ (n >> 4)) & 0x100F00F00F00F00F
    n = (n ^ (n >> 8)) & 0x1F0000FF0000FF
    n = (n ^ (n >> 16)) & 0x1F00000000FFFF
    n = (n ^ (n >> 32)) & 0x1FFFFF
    return n


def _tile(v: Volume, m: Mask, n: int):
    """Zero-padded non-overlapping tiling; returns (values M x n^3, centers M x 3)."""
    if v.dims != m.dims:
        raise DataError(f"volume dims {v.dims} != mask dims {m.dims}")
    if n < 1:
        raise DataError("patch size must be >= 1")
    dims = v.dims
    tiles = tuple(-(-d // n) for d in dims)  # ceil division
    padded = [t * n for t in tiles]
    vol = np.zeros(padded, dtype=np.float64)
    vol[: dims[0], : dims[1], : dims[2]] = v.data
    msk = np.zeros(padded, dtype=np.uint8)
    msk[: dims[0], : dims[1], : dims[2]] = m.data

    def blocks(a):
        return a.reshape(tiles[0], n, tiles[1], n, tiles[2], n).transpose(0, 2, 4, 1, 3, 5)

    values = blocks(vol).reshape(-1, n**3)
    covered = blocks(msk).reshape(-1, n**3).any(axis=1)
    anchors = np.stack(
        np.meshgrid(*(np.arange(t) * n for t in tiles), indexing="ij"), axis=-1
    ).reshape(-1, 3)
    # approximate patch center, clamped so boundary tiles stay inside the volume
    centers = np.minimum(anchors + n // 2, np.array(dims) - 1)
    return values[covered], centers[covered]


def extract_patches(v: Volume, m: Mask, n: int) -> list[Patch]:
    """Cut the volume into non-overlapping n^3 tiles anchored at (0,0,0).

    Boundary tiles are zero-padded to full size. Only tiles covering at
    least one mask voxel are kept; an empty list is a valid result.
    """
    values, centers = _tile(v, m, n)
    return [Patch(values=values[i], center=tuple(int(c) for c in centers[i]))
            for i in range(values.shape[0])]


def _stat_matrix(values: np.ndarray, names: Sequence[str]) -> np.ndarray:
    """Evaluate the requested statistics over axis 1 of an M x n^3 matrix."""
    M = values.shape[0]
    out = np.empty((M, len(names)), dtype=np.float64)
    cache: dict[str, np.ndarray] = {}

    def col(name: str) -> np.ndarray:
        if name in cache:
            return cache[name]
        if name == "mean":
            c = values.mean(axis=1)
        elif name == "median":
            c = np.median(values, axis=1)
        elif name == "mode":
            # most frequent value after rounding to integer HU; ties -> smallest
            c = sstats.mode(np.rint(values).astype(np.int64), axis=1).mode.astype(np.float64)
        elif name == "std":
            c = values.std(axis=1)  # population
        elif name == "iqr":
            q = np.percentile(values, [25, 75], axis=1)
            c = q[1] - q[0]
        elif name == "entropy":
            c = _entropy_rows(values)
        elif name == "range":
            c = values.max(axis=1) - values.min(axis=1)
        elif name == "min":
            c = values.min(axis=1)
        elif name == "max":
            c = values.max(axis=1)
        else:
            raise DataError(f"unknown stat '{name}'")
        cache[name] = c
        return c

    for j, name in enumerate(names):
        out[:, j] = col(name)
    return out


def _entropy_rows(values: np.ndarray) -> np.ndarray:
    """Shannon entropy (nats) of a 32-bin histogram over each row's own range."""
    M, n = values.shape
    lo = values.min(axis=1, keepdims=True)
    hi = values.max(axis=1, keepdims=True)
    span = hi - lo
    flat = span[:, 0] == 0
    width = np.where(span == 0, 1.0, span)
    bins = np.clip((values - lo) / width * _ENTROPY_BINS, 0, _ENTROPY_BINS - 1).astype(np.int64)
    bins += np.arange(M)[:, None] * _ENTROPY_BINS
    counts = np.bincount(bins.ravel(), minlength=M * _ENTROPY_BINS).reshape(M, _ENTROPY_BINS)
    p = counts / n
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log(p), 0.0)
    ent = terms.sum(axis=1)
    ent[flat] = 0.0
    return ent


def patch_stats(p: Patch, names: Sequence[str]) -> np.ndarray:
    """Evaluate statistics for a single patch, in request order."""
    names = tuple(names)
    if not names:
        raise DataError("at least one stat name is required")
    return _stat_matrix(np.asarray(p.values, dtype=np.float64).reshape(1, -1), names)[0]


def pca_fit_transform(values: np.ndarray, k: int) -> np.ndarray:
    """Project M flattened patches onto the top-k principal axes.

    Fit uses the column-centered covariance (no whitening); each
    eigenvector's sign is fixed so its largest-magnitude loading is
    positive. PCA is fit per volume, on that volume's own patches.
    """
    values = np.asarray(values, dtype=np.float64)
    M, nfeat = values.shape
    if M < 2:
        raise NumericalError(f"PCA needs at least 2 patches, got {M}")
    if k > min(M, nfeat):
        raise NumericalError(f"k={k} exceeds min(n_patches, n_voxels) = {min(M, nfeat)}")
    centered = values - values.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    comps = vt[:k]
    flip = comps[np.arange(k), np.abs(comps).argmax(axis=1)] < 0
    comps[flip] *= -1.0
    return centered @ comps.T


def build_point_cloud(v: Volume, m: Mask, cfg: PatchConfig) -> PointCloud:
    """Convert a masked volume into a point cloud, one point per kept patch.

    Each point is (morton(center), intensity encoding...). With
    ``normalize_axes`` every axis is independently min-max scaled to [0,1]
    (a constant axis maps to 0).
    """
    values, centers = _tile(v, m, cfg.patch_size)
    M = values.shape[0]
    if M == 0:
        raise NumericalError("no patch intersects the mask")
    codes = np.array(
        [morton_encode(int(c[2]), int(c[1]), int(c[0])) for c in centers], dtype=np.float64
    )
    if cfg.encoder[0] == "stats":
        enc = _stat_matrix(values, cfg.encoder[1])
    else:
        enc = pca_fit_transform(values, cfg.encoder[1])
    points = np.column_stack([codes, enc])
    if cfg.normalize_axes:
        lo = points.min(axis=0)
        span = points.max(axis=0) - lo
        span[span == 0] = 1.0
        points = (points - lo) / span
    if not np.isfinite(points).all():
        raise NumericalError("point cloud contains non-finite coordinates")
    return PointCloud(points=points, config=cfg)
