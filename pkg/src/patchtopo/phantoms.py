"""Synthetic volumes and point clouds for tests, demos, and benchmarks."""

from __future__ import annotations

import numpy as np

from .io import Mask, Volume


def sphere_phantom(shape: int = 32, hollow: bool = False, seed: int = 0,
                   noise: float = 15.0) -> tuple[Volume, Mask]:
    """A ball-shaped ROI (optionally with a hollow core) in a noisy volume.

    The mask is the ROI; intensities are a bright ROI over a dark
    background with Gaussian noise. Radius and center jitter with the
    seed so repeated samples differ.
    """
    rng = np.random.default_rng(seed)
    center = shape / 2 + rng.uniform(-1.5, 1.5, size=3)
    r_out = shape * rng.uniform(0.32, 0.38)
    r_in = r_out * 0.55 if hollow else 0.0
    zz, yy, xx = np.meshgrid(*(np.arange(shape),) * 3, indexing="ij")
    dist = np.sqrt((zz - center[0]) ** 2 + (yy - center[1]) ** 2 + (xx - center[2]) ** 2)
    roi = (dist <= r_out) & (dist >= r_in)
    data = rng.normal(-40.0, noise, size=(shape,) * 3)
    data[roi] += 140.0
    return Volume(data=data.astype(np.float32), spacing=(1.0, 1.0, 1.0)), Mask(data=roi)


def shell_volume(center_value: float = 9.0) -> tuple[Volume, Mask]:
    """3x3x3 hollow shell: shell voxels 0, center voxel ``center_value``."""
    data = np.zeros((3, 3, 3), dtype=np.float32)
    data[1, 1, 1] = center_value
    return Volume(data=data, spacing=(1.0, 1.0, 1.0)), Mask(data=np.ones((3, 3, 3)))


def two_blob_volume(a: float = 1.0, b: float = 5.0) -> tuple[Volume, Mask]:
    """Two single-voxel blobs with values a < b, disconnected under the mask."""
    data = np.zeros((1, 1, 5), dtype=np.float32)
    data[0, 0, 0] = a
    data[0, 0, 4] = b
    mask = np.zeros((1, 1, 5), dtype=np.uint8)
    mask[0, 0, 0] = 1
    mask[0, 0, 4] = 1
    return Volume(data=data, spacing=(1.0, 1.0, 1.0)), Mask(data=mask)


def random_volume(shape: tuple[int, int, int], seed: int = 0,
                  full_mask: bool = True) -> tuple[Volume, Mask]:
    """Uniform random volume, with a full or random-ball mask."""
    rng = np.random.default_rng(seed)
    data = rng.random(shape, dtype=np.float32) * 100.0
    if full_mask:
        mask = np.ones(shape, dtype=np.uint8)
    else:
        center = np.array(shape) / 2
        zz, yy, xx = np.meshgrid(*(np.arange(s) for s in shape), indexing="ij")
        dist = np.sqrt(((zz - center[0]) ** 2 + (yy - center[1]) ** 2
                        + (xx - center[2]) ** 2))
        mask = (dist <= min(shape) * 0.45).astype(np.uint8)
    return Volume(data=data, spacing=(1.0, 1.0, 1.0)), Mask(data=mask)


def sphere_cloud(n: int = 200, seed: int = 0) -> np.ndarray:
    """n points sampled uniformly on the unit sphere in 3D."""
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(n, 3))
    return g / np.linalg.norm(g, axis=1, keepdims=True)
