"""Persistent statistical vectorization: barcodes to fixed-length features.

Per homology dimension the vector holds 9 statistics for each of the four
derived series (birth, death, lifespan, midpoint), plus barcode entropy
and bar count: 38 entries per dimension, 114 in total.
"""

from __future__ import annotations

import numpy as np

from .errors import DataError
from .persistence import Barcode, barcode_entropy

SERIES = ("birth", "death", "lifespan", "midpoint")
SERIES_STATS = ("mean", "median", "std", "range", "iqr", "p10", "p25", "p75", "p90")

FEATURE_NAMES: tuple[str, ...] = tuple(
    name
    for dim in (0, 1, 2)
    for name in (
        [f"h{dim}_{series}_{stat}" for series in SERIES for stat in SERIES_STATS]
        + [f"h{dim}_entropy", f"h{dim}_count"]
    )
)

N_FEATURES = len(FEATURE_NAMES)  # 114


def _series_stats(x: np.ndarray) -> list[float]:
    p10, p25, p75, p90 = np.percentile(x, [10, 25, 75, 90])
    return [
        float(x.mean()),
        float(np.median(x)),
        float(x.std()),
        float(x.max() - x.min()),
        float(p75 - p25),
        float(p10),
        float(p25),
        float(p75),
        float(p90),
    ]


def _substitute(bars: np.ndarray, cap: float | None) -> np.ndarray:
    out = bars.copy()
    inf = np.isinf(out[:, 1])
    if inf.any():
        # no finite value anywhere: each essential bar falls back to its birth
        out[inf, 1] = out[inf, 0] if cap is None else cap
    return out


def vectorize(b0: Barcode, b1: Barcode, b2: Barcode,
              drop_essential: bool = False) -> np.ndarray:
    """Concatenated 114-entry feature vector for H0/H1/H2 barcodes.

    Infinite deaths are replaced by the maximum finite endpoint occurring
    across the three barcodes before statistics are taken (or dropped
    entirely with ``drop_essential``). Empty barcodes contribute zeros.
    """
    barcodes = (b0, b1, b2)
    for d, bc in enumerate(barcodes):
        if bc.dim != d:
            raise DataError(f"expected barcode of dimension {d}, got {bc.dim}")
    finite_vals = np.concatenate([bc.bars[np.isfinite(bc.bars)] for bc in barcodes])
    cap = float(finite_vals.max()) if finite_vals.size else None

    out = np.empty(N_FEATURES, dtype=np.float64)
    pos = 0
    for bc in barcodes:
        if drop_essential:
            bars = bc.finite()
        else:
            bars = _substitute(bc.bars, cap)
        if bars.shape[0]:
            # canonical bar order makes every statistic bitwise
            # order-independent (float sums are not associative)
            bars = bars[np.lexsort((bars[:, 1], bars[:, 0]))]
        n = bars.shape[0]
        if n == 0:
            out[pos:pos + 38] = 0.0
            pos += 38
            continue
        births = bars[:, 0]
        deaths = bars[:, 1]
        series = (births, deaths, deaths - births, 0.5 * (births + deaths))
        for x in series:
            out[pos:pos + 9] = _series_stats(x)
            pos += 9
        out[pos] = barcode_entropy(Barcode(dim=bc.dim, bars=bars))
        out[pos + 1] = float(n)
        pos += 2
    return out
