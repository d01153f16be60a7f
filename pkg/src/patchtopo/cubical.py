"""Sublevel-set cubical filtration of a 3D volume (T-construction).

Each retained voxel is a top-dimensional 3-cube; every face (squares,
edges, vertices) receives the minimum value over its incident top cubes.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import DataError, NumericalError
from .io import Mask, Volume
from .persistence import Barcode, FilteredComplex, compute_persistence


def _closure_min(top: np.ndarray) -> np.ndarray:
    """Spread top-cube values onto the doubled grid by 3-point axis minima."""
    g = tuple(2 * s + 1 for s in top.shape)
    grid = np.full(g, np.inf)
    grid[1::2, 1::2, 1::2] = top
    for axis in range(3):
        lo = [slice(None)] * 3
        hi = [slice(None)] * 3
        lo[axis] = slice(None, -1)
        hi[axis] = slice(1, None)
        src = grid.copy()
        np.minimum(grid[tuple(lo)], src[tuple(hi)], out=grid[tuple(lo)])
        np.minimum(grid[tuple(hi)], src[tuple(lo)], out=grid[tuple(hi)])
    return grid


@njit(cache=True)
def _cell_dims(lin, s0, s1):  # pragma: no cover - jitted
    n = lin.shape[0]
    dims = np.empty(n, np.int8)
    for i in range(n):
        l = lin[i]
        a = (l // s0) & 1
        r = l % s0
        b = (r // s1) & 1
        c = (r % s1) & 1
        dims[i] = a + b + c
    return dims


@njit(cache=True)
def _cell_boundaries(lin_s, pos, s0, s1):  # pragma: no cover - jitted
    n = lin_s.shape[0]
    indptr = np.empty(n + 1, np.int64)
    indptr[0] = 0
    for i in range(n):
        l = lin_s[i]
        a = (l // s0) & 1
        r = l % s0
        b = (r // s1) & 1
        c = (r % s1) & 1
        indptr[i + 1] = indptr[i] + 2 * (a + b + c)
    indices = np.empty(indptr[n], np.int64)
    for i in range(n):
        l = lin_s[i]
        a = (l // s0) & 1
        r = l % s0
        b = (r // s1) & 1
        c = (r % s1) & 1
        o = indptr[i]
        if a:
            indices[o] = pos[l - s0]
            indices[o + 1] = pos[l + s0]
            o += 2
        if b:
            indices[o] = pos[l - s1]
            indices[o + 1] = pos[l + s1]
            o += 2
        if c:
            indices[o] = pos[l - 1]
            indices[o + 1] = pos[l + 1]
            o += 2
        lo = indptr[i]
        for x in range(lo + 1, o):
            key = indices[x]
            y = x - 1
            while y >= lo and indices[y] > key:
                indices[y + 1] = indices[y]
                y -= 1
            indices[y + 1] = key
    return indptr, indices


def cubical_filtration(v: Volume, m: Mask | None = None) -> FilteredComplex:
    """Build the filtered cubical complex of a (masked) volume.

    With a mask, only mask==1 voxels become top cubes and the complex is
    their closure. Cells are emitted in ascending (value, dimension, grid
    index) order.
    """
    if m is not None:
        if v.dims != m.dims:
            raise DataError(f"volume dims {v.dims} != mask dims {m.dims}")
        top = np.where(m.data.astype(bool), v.data.astype(np.float64), np.inf)
        if not np.isfinite(top).any():
            raise NumericalError("mask excludes every voxel; empty complex")
    else:
        top = v.data.astype(np.float64)

    grid = _closure_min(top)
    g = grid.shape
    s0, s1 = g[1] * g[2], g[2]
    flat = grid.ravel()
    lin = np.flatnonzero(np.isfinite(flat))
    values = flat[lin]
    dims = _cell_dims(lin, s0, s1)

    order = np.lexsort((lin, dims, values))
    lin_s = lin[order]
    pos = np.full(flat.shape[0], -1, dtype=np.int64)
    pos[lin_s] = np.arange(lin_s.shape[0])
    indptr, indices = _cell_boundaries(lin_s, pos, s0, s1)
    return FilteredComplex(dims=dims[order], values=values[order], indptr=indptr,
                           indices=indices, validate=False, presorted=True)


def cubical_persistence(v: Volume, m: Mask | None = None) -> tuple[Barcode, ...]:
    """H0/H1/H2 barcodes of the sublevel-set cubical filtration."""
    return compute_persistence(cubical_filtration(v, m), max_dim=2)
