"""Volume preprocessing: resampling, ROI masking, and padded cropping."""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy import ndimage

from .errors import DataError, NumericalError
from .io import Mask, Volume


def average_spacing(volumes: Sequence[Volume]) -> tuple[float, float, float]:
    """Arithmetic mean of voxel spacing per axis over a set of volumes."""
    if len(volumes) == 0:
        raise DataError("average_spacing needs at least one volume")
    spac = np.array([v.spacing for v in volumes], dtype=np.float64)
    return tuple(spac.mean(axis=0))


def resample(v: Volume, target_spacing: Sequence[float]) -> Volume:
    """Resample to ``target_spacing`` with trilinear interpolation.

    Voxel index i along an axis sits at physical position i * spacing;
    output dims are round(dims * spacing / target), at least 1 per axis.
    Sample positions beyond the input grid clamp to the boundary voxel.
    """
    target = tuple(float(s) for s in target_spacing)
    if len(target) != 3 or any(s <= 0 for s in target):
        raise DataError(f"target spacing must be 3 positive values, got {target_spacing}")
    in_dims = np.array(v.dims, dtype=np.float64)
    in_spacing = np.array(v.spacing, dtype=np.float64)
    out_dims = np.maximum(1, np.round(in_dims * in_spacing / np.array(target))).astype(int)
    if tuple(out_dims) == v.dims and target == v.spacing:
        return Volume(data=v.data.copy(), spacing=target)
    # physical position of output voxel j is j * target; map into input index space
    grids = [np.arange(out_dims[a]) * target[a] / in_spacing[a] for a in range(3)]
    coords = np.meshgrid(*grids, indexing="ij")
    data = ndimage.map_coordinates(
        v.data.astype(np.float64), np.stack(coords), order=1, mode="nearest"
    )
    return Volume(data=data.astype(np.float32), spacing=target)


def mask_and_crop(v: Volume, m: Mask, pad: int = 2) -> tuple[Volume, Mask, tuple[int, int, int]]:
    """Apply the ROI mask and crop to its padded bounding box.

    Voxels outside the mask are filled with (roi_min - 1) so background
    always enters a sublevel filtration strictly before any ROI voxel.
    Returns the cropped volume, the matching cropped mask, and the crop
    offset (origin of the crop in input voxel coordinates).
    """
    if v.dims != m.dims:
        raise DataError(f"volume dims {v.dims} != mask dims {m.dims}")
    if pad < 0:
        raise DataError("pad must be non-negative")
    inside = m.data.astype(bool)
    if not inside.any():
        raise NumericalError("mask selects no voxels")
    roi_min = float(v.data[inside].min())
    filled = np.full(v.dims, np.float32(roi_min - 1.0), dtype=np.float32)
    filled[inside] = v.data[inside]

    lo, hi = [], []
    for axis in range(3):
        other = tuple(a for a in range(3) if a != axis)
        any_axis = inside.any(axis=other)
        idx = np.where(any_axis)[0]
        lo.append(max(0, int(idx[0]) - pad))
        hi.append(min(v.dims[axis], int(idx[-1]) + 1 + pad))
    sl = tuple(slice(lo[a], hi[a]) for a in range(3))
    cropped = Volume(data=filled[sl], spacing=v.spacing)
    cropped_mask = Mask(data=m.data[sl])
    return cropped, cropped_mask, (lo[0], lo[1], lo[2])
