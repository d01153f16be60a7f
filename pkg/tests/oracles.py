"""Brute-force reference implementations used to verify the fast paths.

Everything here is written for clarity over speed and stays independent
of the code under test: dense GF(2) linear algebra, exhaustive
circumsphere checks, Prim's MST, and direct-arithmetic statistics.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np


def gf2_rank(mat: np.ndarray) -> int:
    """Rank of a 0/1 matrix over GF(2) by Gaussian elimination."""
    m = (np.asarray(mat, dtype=np.uint8) % 2).copy()
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if m[i, c]:
                pivot = i
                break
        if pivot is None:
            continue
        m[[r, pivot]] = m[[pivot, r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
        if r == rows:
            break
    return r


def betti_numbers(fc, t: float, max_dim: int = 2) -> list[int]:
    """Betti numbers of the sublevel complex at value t via dense ranks."""
    present = np.flatnonzero(fc.values <= t)
    pset = set(present.tolist())
    local = {int(g): i for i, g in enumerate(present)}
    dims = fc.dims[present]
    n_by_dim = {d: int((dims == d).sum()) for d in range(int(fc.dims.max()) + 1)}

    def boundary_rank(k: int) -> int:
        rows = [local[g] for g in present if fc.dims[g] == k - 1]
        cols = [int(g) for g in present if fc.dims[g] == k]
        if not rows or not cols:
            return 0
        row_index = {g: i for i, g in enumerate(
            [g for g in present if fc.dims[g] == k - 1])}
        mat = np.zeros((len(rows), len(cols)), dtype=np.uint8)
        for j, g in enumerate(cols):
            for f in fc.indices[fc.indptr[g]:fc.indptr[g + 1]]:
                assert int(f) in pset, "face missing from sublevel set"
                mat[row_index[int(f)], j] ^= 1
        return gf2_rank(mat)

    betti = []
    for d in range(max_dim + 1):
        n_d = n_by_dim.get(d, 0)
        betti.append(n_d - boundary_rank(d) - boundary_rank(d + 1))
    return betti


def bars_alive(barcodes, t: float) -> list[int]:
    """Number of bars alive at t per dimension (birth <= t < death)."""
    return [int(((bc.bars[:, 0] <= t) & (t < bc.bars[:, 1])).sum()) for bc in barcodes]


def random_filtered_complex(rng: np.random.Generator):
    """A random downward-closed simplicial complex with monotone integer
    values (ties on purpose), at most ~160 cells."""
    from patchtopo.persistence import FilteredComplex

    nv = int(rng.integers(3, 9))
    cells: dict[tuple, float] = {(v,): float(rng.integers(0, 4)) for v in range(nv)}
    for e in combinations(range(nv), 2):
        if rng.random() < 0.55:
            cells[e] = max(cells[(e[0],)], cells[(e[1],)]) + float(rng.integers(0, 3))
    for tri in combinations(range(nv), 3):
        faces = list(combinations(tri, 2))
        if all(f in cells for f in faces) and rng.random() < 0.5:
            cells[tri] = max(cells[f] for f in faces) + float(rng.integers(0, 2))
    for tet in combinations(range(nv), 4):
        faces = list(combinations(tet, 3))
        if all(f in cells for f in faces) and rng.random() < 0.4:
            cells[tet] = max(cells[f] for f in faces) + float(rng.integers(0, 2))

    names = sorted(cells, key=lambda s: (len(s), s))
    ids = {s: i for i, s in enumerate(names)}
    spec = [(ids[s], len(s) - 1, cells[s],
             [ids[f] for f in combinations(s, len(s) - 1)] if len(s) > 1 else [])
            for s in names]
    return FilteredComplex.from_cells(spec)


def circumsphere(verts: np.ndarray) -> tuple[np.ndarray, float]:
    """Center (in the affine hull) and squared radius through all vertices."""
    a = verts[1:] - verts[0]
    g = a @ a.T
    h = 0.5 * (a * a).sum(axis=1)
    lam = np.linalg.lstsq(g, h, rcond=None)[0]
    center = verts[0] + lam @ a
    return center, float(((verts - center) ** 2).sum(axis=1).max())


def brute_delaunay(points: np.ndarray) -> set[tuple[int, ...]]:
    """All (d+1)-subsets whose circumsphere is empty of other points."""
    n, d = points.shape
    out = set()
    for comb in combinations(range(n), d + 1):
        sub = points[list(comb)]
        if abs(np.linalg.det(sub[1:] - sub[0])) < 1e-12:
            continue
        center, r2 = circumsphere(sub)
        others = [i for i in range(n) if i not in comb]
        d2 = ((points[others] - center) ** 2).sum(axis=1)
        if not (d2 < r2 * (1 - 1e-12)).any():
            out.add(tuple(sorted(comb)))
    return out


def brute_alpha_barcodes(points: np.ndarray, simplices: np.ndarray):
    """Alpha persistence with globally checked Gabriel property."""
    from patchtopo.persistence import FilteredComplex, compute_persistence

    n = points.shape[0]
    top = simplices.shape[1] - 1
    byd: dict[int, set] = {top: set(map(tuple, np.sort(simplices, axis=1)))}
    for k in range(top, 0, -1):
        byd[k - 1] = {f for s in byd[k] for f in combinations(s, k)}
    vals: dict[tuple, float] = {}
    for k in range(top, 0, -1):
        for s in sorted(byd[k]):
            center, r2 = circumsphere(points[list(s)])
            others = [i for i in range(n) if i not in s]
            inside = ((points[others] - center) ** 2).sum(axis=1) < r2
            if k == top or not inside.any():
                vals[s] = r2
            else:
                vals[s] = min(vals[tuple(sorted(set(s) | {v}))]
                              for v in range(n)
                              if v not in s and tuple(sorted(set(s) | {v})) in byd[k + 1])
    for v in range(n):
        vals[(v,)] = 0.0
    for k in range(1, top + 1):  # monotone repair, mirrors the contract
        for s in sorted(byd[k]):
            vals[s] = max(vals[s], max(vals[f] for f in combinations(s, k)))
    names = sorted(vals, key=lambda s: (len(s), s))
    ids = {s: i for i, s in enumerate(names)}
    cells = [(ids[s], len(s) - 1, vals[s],
              [ids[f] for f in combinations(s, len(s) - 1)] if len(s) > 1 else [])
             for s in names if len(s) - 1 <= 3]
    return compute_persistence(FilteredComplex.from_cells(cells), 2)


def prim_mst_lengths(points: np.ndarray) -> np.ndarray:
    """Sorted MST edge lengths by Prim's algorithm on dense distances."""
    n = points.shape[0]
    dist = np.sqrt(((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=2))
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = dist[0].copy()
    out = []
    for _ in range(n - 1):
        j = int(np.argmin(np.where(in_tree, np.inf, best)))
        out.append(best[j])
        in_tree[j] = True
        best = np.minimum(best, dist[j])
    return np.sort(np.array(out))


def direct_stats(values, name: str) -> float:
    """Single-statistic reference using plain Python arithmetic."""
    xs = sorted(float(x) for x in values)
    n = len(xs)

    def percentile(p: float) -> float:
        h = (n - 1) * p / 100.0
        lo = math.floor(h)
        hi = min(lo + 1, n - 1)
        return xs[lo] + (h - lo) * (xs[hi] - xs[lo])

    if name == "mean":
        return math.fsum(xs) / n
    if name == "median":
        mid = n // 2
        return xs[mid] if n % 2 else 0.5 * (xs[mid - 1] + xs[mid])
    if name == "mode":
        counts: dict[int, int] = {}
        for x in xs:
            r = int(np.rint(x))
            counts[r] = counts.get(r, 0) + 1
        best = max(counts.values())
        return float(min(r for r, c in counts.items() if c == best))
    if name == "std":
        mu = math.fsum(xs) / n
        return math.sqrt(math.fsum((x - mu) ** 2 for x in xs) / n)
    if name == "iqr":
        return percentile(75) - percentile(25)
    if name == "entropy":
        lo, hi = xs[0], xs[-1]
        if hi == lo:
            return 0.0
        counts = [0] * 32
        for x in xs:
            b = min(31, int((x - lo) / (hi - lo) * 32))
            counts[b] += 1
        return -math.fsum((c / n) * math.log(c / n) for c in counts if c)
    if name == "range":
        return xs[-1] - xs[0]
    if name == "min":
        return xs[0]
    if name == "max":
        return xs[-1]
    raise ValueError(name)


def brute_auc(y_true: np.ndarray, scores: np.ndarray) -> float:
    """AUC by explicit positive/negative pair counting with tie credit."""
    pos = scores[y_true == 1]
    neg = scores[y_true == 0]
    total = 0.0
    for p in pos:
        for q in neg:
            total += 1.0 if p > q else (0.5 if p == q else 0.0)
    return total / (len(pos) * len(neg))
