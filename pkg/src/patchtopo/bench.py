"""Wall-clock comparison of patch-based vs cubical persistence."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .alpha import alpha_persistence
from .cubical import cubical_filtration
from .errors import DataError
from .io import Mask, Volume
from .patches import PatchConfig, build_point_cloud
from .persistence import compute_persistence


@dataclass
class MethodTiming:
    method: str
    mean_s: float
    std_s: float
    trials: int
    n_points: int = 0
    point_dim: int = 0
    n_cells: int = 0

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "mean_s": self.mean_s,
            "std_s": self.std_s,
            "trials": self.trials,
            "n_points": self.n_points,
            "point_dim": self.point_dim,
            "n_cells": self.n_cells,
        }


@dataclass
class BenchReport:
    config: str
    timings: list[MethodTiming] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {"config": self.config, "timings": [t.as_dict() for t in self.timings]},
            indent=2,
        ) + "\n"

    def to_csv(self) -> str:
        lines = ["method,mean_s,std_s,trials,n_points,point_dim,n_cells"]
        for t in self.timings:
            lines.append(f"{t.method},{t.mean_s!r},{t.std_s!r},{t.trials},"
                         f"{t.n_points},{t.point_dim},{t.n_cells}")
        return "\n".join(lines) + "\n"


def _time_fn(fn, trials: int) -> tuple[float, float]:
    fn()  # warm-up excluded from statistics (JIT, caches)
    times = np.empty(trials)
    for t in range(trials):
        t0 = time.perf_counter()
        fn()
        times[t] = time.perf_counter() - t0
    return float(times.mean()), float(times.std())


def bench_ph(v: Volume, m: Mask, cfg: PatchConfig, trials: int = 100,
             include_build: bool = True) -> BenchReport:
    """Mean/std wall time of patch-based vs cubical PH over repeated runs.

    The patch path times point-cloud construction plus alpha persistence
    by default (``include_build=False`` times persistence only, matching
    a PH-only reading). Volume I/O is never included.
    """
    if trials < 1:
        raise DataError("trials must be >= 1")

    cloud = build_point_cloud(v, m, cfg)

    if include_build:
        def patch_run():
            alpha_persistence(build_point_cloud(v, m, cfg))
    else:
        def patch_run():
            alpha_persistence(cloud)

    fc = cubical_filtration(v, m)
    n_cells = fc.n_cells

    def cubical_run():
        compute_persistence(cubical_filtration(v, m), max_dim=2)

    report = BenchReport(config=cfg.describe())
    mean_s, std_s = _time_fn(patch_run, trials)
    report.timings.append(MethodTiming(
        method="patch_alpha", mean_s=mean_s, std_s=std_s, trials=trials,
        n_points=cloud.n_points, point_dim=cloud.dim))
    mean_s, std_s = _time_fn(cubical_run, trials)
    report.timings.append(MethodTiming(
        method="cubical", mean_s=mean_s, std_s=std_s, trials=trials,
        n_cells=n_cells))
    return report
