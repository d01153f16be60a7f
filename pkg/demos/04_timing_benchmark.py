"""Patch-based vs cubical persistence: the time story.

The cubical complex of an n^3 volume has ~(2n+1)^3 cells; the patch
route collapses each n_p^3 tile to one point first, so its alpha
complex is orders of magnitude smaller. Direction, not magnitude, is
the portable claim; absolute numbers depend on the machine.
"""

from patchtopo import PatchConfig, bench_ph
from patchtopo.phantoms import random_volume

volume, mask = random_volume((64, 64, 64), seed=0)
print(f"volume {volume.dims}, full mask")

for patch_size in (4, 6, 8):
    cfg = PatchConfig(patch_size=patch_size, encoder=("stats", ("mean", "std")))
    report = bench_ph(volume, mask, cfg, trials=5)
    patch, cubical = report.timings
    print(f"patch {patch_size}: N={patch.n_points:5d} points  "
          f"patch-based {patch.mean_s * 1e3:7.1f} ms   "
          f"cubical {cubical.mean_s * 1e3:7.1f} ms "
          f"({cubical.n_cells} cells, {cubical.mean_s / patch.mean_s:.0f}x)")

print("\nlarger patches -> smaller clouds -> faster persistence;")
print("the cubical side is independent of patch size.")
