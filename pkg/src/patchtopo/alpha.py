"""Alpha filtration of a point cloud via Delaunay triangulation.

The triangulation runs on deterministically jittered coordinates so that
cospherical inputs (guaranteed on min-max-normalized grid-derived data)
resolve to some valid tie-break; filtration values are then computed from
the original coordinates, so tied configurations receive equal values and
the barcode does not depend on the tie-break chosen.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from scipy.spatial import Delaunay as _SciPyDelaunay
from scipy.spatial import QhullError

from .errors import DataError, NumericalError
from .patches import PointCloud
from .persistence import Barcode, FilteredComplex, compute_persistence

#: 4D triangulations refuse clouds larger than this (simplex counts grow
#: super-linearly in 4D).
MAX_POINTS_4D = 50_000

_JITTER_SCALE = 1e-9
_RANK_RTOL = 1e-8


@dataclass
class AlphaFiltration:
    """All faces of a Delaunay triangulation with their alpha values.

    ``simplices[k]`` is an (S_k, k+1) array of sorted vertex indices,
    ``values[k]`` the squared-circumradius-scale filtration value per
    simplex, and ``facets[k]`` the row indices of each simplex's facets in
    ``simplices[k-1]``. Vertices have value 0 and values are monotone:
    value(face) <= value(coface).
    """

    simplices: dict[int, np.ndarray]
    values: dict[int, np.ndarray]
    facets: dict[int, np.ndarray]
    n_points: int

    @property
    def top_dim(self) -> int:
        return max(self.simplices)

    def to_filtered_complex(self, max_cell_dim: int = 3) -> FilteredComplex:
        """Assemble cells of dimension <= max_cell_dim in filtration order."""
        top = min(self.top_dim, max_cell_dim)
        counts = [self.values[k].shape[0] for k in range(top + 1)]
        offsets = np.concatenate([[0], np.cumsum(counts)])
        n = int(offsets[-1])
        dims = np.concatenate([np.full(counts[k], k, dtype=np.int8) for k in range(top + 1)])
        values = np.concatenate([self.values[k] for k in range(top + 1)])
        ids = np.arange(n, dtype=np.int64)
        indptr = [np.zeros(counts[0] + 1, dtype=np.int64)]
        indices = []
        for k in range(1, top + 1):
            fk = self.facets[k] + offsets[k - 1]
            indices.append(fk.ravel())
            indptr.append(np.full(counts[k], k + 1, dtype=np.int64))
        indptr = np.concatenate([indptr[0], np.cumsum(np.concatenate(indptr[1:]))
                                 if top >= 1 else np.empty(0, dtype=np.int64)])
        indices = np.concatenate(indices) if indices else np.empty(0, dtype=np.int64)

        order = np.lexsort((ids, dims, values))
        pos = np.empty(n, dtype=np.int64)
        pos[order] = np.arange(n)
        sizes = np.diff(indptr)[order]
        new_indptr = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        total = int(new_indptr[-1])
        # gather source slots: old column start of each new column, expanded
        starts = indptr[:-1][order]
        offs = np.arange(total, dtype=np.int64) - np.repeat(new_indptr[:-1], sizes)
        take = np.repeat(starts, sizes) + offs
        new_indices = pos[indices[take]]
        return FilteredComplex(dims=dims[order], values=values[order],
                               indptr=new_indptr, indices=new_indices)


def _jitter(points: np.ndarray) -> np.ndarray:
    """Deterministic hash-seeded perturbation, 1e-9 of each axis range."""
    span = points.max(axis=0) - points.min(axis=0)
    digest = hashlib.blake2b(np.ascontiguousarray(points).tobytes(),
                             digest_size=8).digest()
    rng = np.random.default_rng(int.from_bytes(digest, "little"))
    return points + rng.uniform(-1.0, 1.0, points.shape) * (span * _JITTER_SCALE)


def delaunay(points: np.ndarray, jitter: bool = True,
             max_points_4d: int = MAX_POINTS_4D) -> np.ndarray:
    """Top-dimensional simplices of the Delaunay triangulation.

    Returns an (n_simplices, d+1) array of vertex indices with sorted rows.
    Every point must appear as a vertex; fewer than d+1 points or an
    affinely dependent cloud is an error.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise DataError("points must be an N x d array")
    n, d = points.shape
    if d < 1:
        raise DataError("points must have at least one coordinate")
    if n < d + 1:
        raise NumericalError(f"need at least {d + 1} points in {d}D, got {n}")
    if d >= 4 and n > max_points_4d:
        raise NumericalError(
            f"{n} points exceeds the 4D triangulation cap of {max_points_4d}"
        )
    if d == 1:
        order = np.argsort(points[:, 0], kind="stable")
        return np.sort(np.column_stack([order[:-1], order[1:]]), axis=1)
    coords = _jitter(points) if jitter else points
    try:
        tri = _SciPyDelaunay(coords)
    except QhullError as e:
        raise NumericalError(f"degenerate point cloud: {str(e).splitlines()[0]}") from e
    simplices = np.sort(tri.simplices.astype(np.int64), axis=1)
    used = np.unique(simplices)
    if used.size != n:
        raise NumericalError("points are affinely dependent after jitter")
    # deterministic row order regardless of Qhull internals
    return simplices[np.lexsort(simplices.T[::-1])]


def _circumspheres(verts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Smallest circumsphere (center in the affine hull) per simplex.

    ``verts`` has shape (S, k+1, d). Near-singular simplices (slivers from
    tie-break jitter) fall back to a least-squares solve with the radius
    taken as the largest vertex distance.
    """
    S, kp1, d = verts.shape
    k = kp1 - 1
    if k == 0:
        return verts[:, 0, :], np.zeros(S)
    A = verts[:, 1:, :] - verts[:, :1, :]
    G = A @ A.transpose(0, 2, 1)
    h = 0.5 * (A * A).sum(axis=2)
    lam = np.full((S, k), np.nan)
    det = np.linalg.det(G)
    ok = np.isfinite(det) & (det != 0)
    if ok.any():
        try:
            lam[ok] = np.linalg.solve(G[ok], h[ok][..., None])[..., 0]
        except np.linalg.LinAlgError:
            pass  # leave NaN; the least-squares repair below takes over
    centers = verts[:, 0, :] + np.einsum("sk,skd->sd", lam, A)
    dist2 = ((verts - centers[:, None, :]) ** 2).sum(axis=2)
    r2 = dist2.max(axis=1)
    spread = r2 - dist2.min(axis=1)
    bad = ~np.isfinite(r2) | (spread > 1e-9 * np.maximum(r2, 1e-300))
    for s in np.flatnonzero(bad):
        lam_s = np.linalg.lstsq(G[s], h[s], rcond=1e-10)[0]
        centers[s] = verts[s, 0] + lam_s @ A[s]
        r2[s] = ((verts[s] - centers[s]) ** 2).sum(axis=1).max()
    return centers, r2


def alpha_values(simplices: np.ndarray, points: np.ndarray) -> AlphaFiltration:
    """Alpha filtration values for a triangulation and its faces.

    A simplex that is Gabriel (no other vertex strictly inside its
    smallest circumsphere) takes its squared circumradius; otherwise it
    takes the minimum of its cofaces' values. Vertices take 0.
    """
    points = np.asarray(points, dtype=np.float64)
    simplices = np.sort(np.asarray(simplices, dtype=np.int64), axis=1)
    if simplices.ndim != 2 or simplices.shape[0] == 0:
        raise DataError("need a non-empty (n, k+1) simplex array")
    top = simplices.shape[1] - 1
    n = points.shape[0]

    simp: dict[int, np.ndarray] = {top: np.unique(simplices, axis=0)}
    facets: dict[int, np.ndarray] = {}
    opposites: dict[int, np.ndarray] = {}
    for k in range(top, 0, -1):
        sk = simp[k]
        S = sk.shape[0]
        blocks = [np.delete(sk, p, axis=1) for p in range(k + 1)]
        all_facets = np.concatenate(blocks, axis=0)
        uniq, inv = np.unique(all_facets, axis=0, return_inverse=True)
        simp[k - 1] = uniq
        facets[k] = inv.reshape(k + 1, S).T
        opposites[k] = sk.T.reshape(-1)  # vertex dropped for block p is column p
    if simp[0].shape[0] != n or not np.array_equal(simp[0][:, 0], np.arange(n)):
        raise DataError("triangulation does not cover every point")

    centers: dict[int, np.ndarray] = {}
    values: dict[int, np.ndarray] = {}
    for k in range(1, top + 1):
        centers[k], values[k] = _circumspheres(points[simp[k]])
    values[0] = np.zeros(n)

    # top simplices keep their circumradius; lower dims take min over
    # cofaces unless Gabriel
    for k in range(top - 1, 0, -1):
        S = simp[k].shape[0]
        inv = facets[k + 1].T.reshape(-1)
        covals = np.repeat(values[k + 1][None, :], k + 2, axis=0).reshape(-1)
        opp = opposites[k + 1]
        inside = ((points[opp] - centers[k][inv]) ** 2).sum(axis=1) < values[k][inv]
        blocked = np.zeros(S, dtype=bool)
        np.logical_or.at(blocked, inv, inside)
        minco = np.full(S, np.inf)
        np.minimum.at(minco, inv, covals)
        values[k] = np.where(blocked, minco, values[k])
    # guard monotonicity against float noise in degenerate fallbacks
    for k in range(1, top + 1):
        face_max = values[k - 1][facets[k]].max(axis=1)
        values[k] = np.maximum(values[k], face_max)

    return AlphaFiltration(simplices=simp, values=values, facets=facets, n_points=n)


def _affine_projection(points: np.ndarray) -> np.ndarray:
    """Project onto the affine span; degenerate axes are dropped entirely."""
    centered = points - points.mean(axis=0)
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        raise NumericalError("all points coincide")
    rank = int((s > s[0] * _RANK_RTOL).sum())
    if rank == points.shape[1]:
        return points
    return centered @ vt[:rank].T


def alpha_persistence(pc: PointCloud | np.ndarray) -> tuple[Barcode, ...]:
    """H0/H1/H2 barcodes of the alpha filtration of a point cloud.

    Affinely dependent clouds (planar or collinear configurations) are
    triangulated inside their affine span, so e.g. three points spanning a
    triangle in 3D still produce its H1 bar.
    """
    points = pc.points if isinstance(pc, PointCloud) else np.asarray(pc, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] == 0:
        raise DataError("point cloud must be a non-empty N x d array")
    if not np.isfinite(points).all():
        raise DataError("point cloud has non-finite coordinates")
    if points.shape[0] == 1:
        return (Barcode(dim=0, bars=np.array([[0.0, np.inf]])),
                Barcode(dim=1), Barcode(dim=2))
    coords = _affine_projection(points)
    simplices = delaunay(coords)
    filt = alpha_values(simplices, coords)
    fc = filt.to_filtered_complex(max_cell_dim=3)
    return compute_persistence(fc, max_dim=2)
