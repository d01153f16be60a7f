"""Persistence computation over Z/2: filtered complexes, boundary-matrix
reduction with the twist (clearing) optimization, and barcode entropy."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from .errors import DataError


@dataclass
class Barcode:
    """Multiset of (birth, death) intervals in one homology dimension.

    ``bars`` has shape (n, 2); equal rows accumulate multiplicity and
    ``death`` is ``inf`` for essential classes.
    """

    dim: int
    bars: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))

    def __post_init__(self):
        self.bars = np.asarray(self.bars, dtype=np.float64).reshape(-1, 2)
        if self.bars.size and (self.bars[:, 1] < self.bars[:, 0]).any():
            raise DataError("barcode has death < birth")

    @property
    def n_bars(self) -> int:
        return self.bars.shape[0]

    def finite(self) -> np.ndarray:
        return self.bars[np.isfinite(self.bars[:, 1])]

    def canonical(self) -> np.ndarray:
        """Bars sorted by (birth, death); the comparison/serialization order."""
        if self.bars.size == 0:
            return self.bars
        order = np.lexsort((self.bars[:, 1], self.bars[:, 0]))
        return self.bars[order]


class FilteredComplex:
    """Cells ordered by (filtration value, dimension, id) with Z/2 boundaries.

    Construct via :meth:`from_cells` for explicit cell lists, or pass
    pre-sorted arrays directly (``values`` ascending, faces preceding
    cofaces; ``indices`` holds positions into the sorted cell order).
    """

    def __init__(self, dims: np.ndarray, values: np.ndarray,
                 indptr: np.ndarray, indices: np.ndarray,
                 validate: bool = True, presorted: bool = False):
        self.dims = np.ascontiguousarray(dims, dtype=np.int8)
        self.values = np.ascontiguousarray(values, dtype=np.float64)
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        n = self.dims.shape[0]
        if self.values.shape[0] != n or self.indptr.shape[0] != n + 1:
            raise DataError("inconsistent cell array lengths")
        if not presorted:
            # sort each boundary column ascending (the reducer requires it)
            col_ids = np.repeat(np.arange(n, dtype=np.int64), np.diff(self.indptr))
            order = np.lexsort((self.indices, col_ids))
            self.indices = self.indices[order]
            if validate:
                self._validate(col_ids)
        elif validate:
            col_ids = np.repeat(np.arange(n, dtype=np.int64), np.diff(self.indptr))
            self._validate(col_ids)

    def _validate(self, col_ids: np.ndarray) -> None:
        n = self.n_cells
        if n and (np.diff(self.values) < 0).any():
            raise DataError("cells are not sorted by filtration value")
        if self.indices.size:
            if self.indices.min() < 0 or self.indices.max() >= n:
                raise DataError("boundary references unknown cell")
            if (self.indices >= col_ids).any():
                raise DataError("a face does not precede its coface")
            if (self.dims[self.indices] != self.dims[col_ids] - 1).any():
                raise DataError("boundary entries must be one dimension lower")
            if (self.values[self.indices] > self.values[col_ids]).any():
                raise DataError("face filtration value exceeds coface value")
            dup = (np.diff(self.indices) == 0) & (np.diff(col_ids) == 0)
            if dup.any():
                raise DataError("duplicate face in a boundary column")
        if ((self.dims >= 1) & (np.diff(self.indptr) == 0)).any():
            raise DataError("positive-dimensional cell with empty boundary")

    @classmethod
    def from_cells(cls, cells: Iterable[tuple[int, int, float, Sequence[int]]]) -> "FilteredComplex":
        """Build from (id, dimension, value, face ids) tuples in any order."""
        cells = list(cells)
        if not cells:
            raise DataError("empty complex")
        ids = np.array([c[0] for c in cells], dtype=np.int64)
        dims = np.array([c[1] for c in cells], dtype=np.int8)
        values = np.array([c[2] for c in cells], dtype=np.float64)
        if np.unique(ids).size != ids.size:
            raise DataError("duplicate cell ids")
        order = np.lexsort((ids, dims, values))
        pos = np.empty(ids.size, dtype=np.int64)
        id_sorted = np.argsort(ids)
        lookup_ids = ids[id_sorted]
        pos_of_rank = np.empty(ids.size, dtype=np.int64)
        pos_of_rank[order] = np.arange(ids.size)
        indptr = [0]
        indices = []
        for rank in order:
            faces = cells[rank][3]
            for f in faces:
                i = np.searchsorted(lookup_ids, f)
                if i >= lookup_ids.size or lookup_ids[i] != f:
                    raise DataError(f"boundary references unknown cell id {f}")
                indices.append(pos_of_rank[id_sorted[i]])
            indptr.append(len(indices))
        return cls(
            dims=dims[order],
            values=values[order],
            indptr=np.array(indptr, dtype=np.int64),
            indices=np.array(indices, dtype=np.int64),
        )

    @property
    def n_cells(self) -> int:
        return self.dims.shape[0]


@njit(cache=True)
def _reduce_twist(indptr, indices, dims, top_dim):  # pragma: no cover - jitted
    nc = dims.shape[0]
    partner = np.full(nc, -1, np.int64)
    pivot_owner = np.full(nc, -1, np.int64)
    pool = np.empty(max(16, 2 * indices.shape[0]), np.int64)
    pool_n = 0
    col_start = np.full(nc, -1, np.int64)
    col_len = np.zeros(nc, np.int64)
    cur = np.empty(1024, np.int64)
    tmp = np.empty(1024, np.int64)

    for dd in range(top_dim, 0, -1):
        for j in range(nc):
            if dims[j] != dd or partner[j] != -1:
                continue
            m = indptr[j + 1] - indptr[j]
            if m == 0:
                continue
            while cur.shape[0] < m:
                cur = np.empty(2 * cur.shape[0], np.int64)
            for t in range(m):
                cur[t] = indices[indptr[j] + t]
            cur_n = m
            while cur_n > 0:
                low = cur[cur_n - 1]
                k = pivot_owner[low]
                if k == -1:
                    pivot_owner[low] = j
                    partner[low] = j
                    partner[j] = low
                    if pool_n + cur_n > pool.shape[0]:
                        cap = pool.shape[0]
                        while cap < pool_n + cur_n:
                            cap *= 2
                        grown = np.empty(cap, np.int64)
                        grown[:pool_n] = pool[:pool_n]
                        pool = grown
                    col_start[j] = pool_n
                    col_len[j] = cur_n
                    for t in range(cur_n):
                        pool[pool_n + t] = cur[t]
                    pool_n += cur_n
                    break
                ks = col_start[k]
                kn = col_len[k]
                if cur_n + kn > tmp.shape[0]:
                    cap = tmp.shape[0]
                    while cap < cur_n + kn:
                        cap *= 2
                    tmp = np.empty(cap, np.int64)
                a = 0
                b = 0
                o = 0
                while a < cur_n and b < kn:
                    va = cur[a]
                    vb = pool[ks + b]
                    if va < vb:
                        tmp[o] = va
                        a += 1
                        o += 1
                    elif vb < va:
                        tmp[o] = vb
                        b += 1
                        o += 1
                    else:
                        a += 1
                        b += 1
                while a < cur_n:
                    tmp[o] = cur[a]
                    a += 1
                    o += 1
                while b < kn:
                    tmp[o] = pool[ks + b]
                    b += 1
                    o += 1
                swap = cur
                cur = tmp
                tmp = swap
                cur_n = o
    return partner


def compute_persistence(fc: FilteredComplex, max_dim: int = 2) -> tuple[Barcode, ...]:
    """Barcodes in dimensions 0..max_dim by Z/2 column reduction.

    Columns are processed in filtration order, top dimension first, with
    clearing of paired births. A pair (face, coface) at equal filtration
    values is a zero-persistence bar and is dropped from the output.
    """
    if fc.n_cells == 0:
        raise DataError("empty complex")
    top = min(int(fc.dims.max()), max_dim + 1)
    partner = _reduce_twist(fc.indptr, fc.indices, fc.dims, top)

    idx = np.arange(fc.n_cells, dtype=np.int64)
    births = np.flatnonzero((partner > idx) & (fc.dims <= max_dim))
    b_vals = fc.values[births]
    d_vals = fc.values[partner[births]]
    keep = d_vals > b_vals
    pair_dims = fc.dims[births[keep]]
    pair_bars = np.column_stack([b_vals[keep], d_vals[keep]])
    ess = np.flatnonzero((partner == -1) & (fc.dims <= max_dim))
    out = []
    for d in range(max_dim + 1):
        finite = pair_bars[pair_dims == d]
        e = fc.values[ess[fc.dims[ess] == d]]
        essential = np.column_stack([e, np.full(e.shape[0], np.inf)])
        out.append(Barcode(dim=d, bars=np.vstack([finite.reshape(-1, 2),
                                                  essential.reshape(-1, 2)])))
    return tuple(out)


def barcode_entropy(b: Barcode) -> float:
    """Shannon entropy (nats) of the normalized lifespan distribution.

    Infinite bars are excluded; an empty or all-infinite barcode has
    entropy 0. Zero-length bars contribute nothing (0 log 0 := 0).
    """
    fin = b.finite()
    if fin.shape[0] == 0:
        return 0.0
    lengths = fin[:, 1] - fin[:, 0]
    total = lengths.sum()
    if total <= 0:
        return 0.0
    p = lengths[lengths > 0] / total
    return float(-(p * np.log(p)).sum() + 0.0)
