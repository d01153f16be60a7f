"""A miniature end-to-end classification study.

Two synthetic classes (hollow-core vs solid spherical ROIs) are pushed
through the full pipeline: patch encoding, alpha persistence, barcode
vectorization, and stratified 5-fold cross-validation with both
classifiers. The hollow core leaves an H2 signature the features pick up.
"""

import numpy as np

from patchtopo import (FEATURE_NAMES, PatchConfig, alpha_persistence,
                       build_point_cloud, cross_validate, vectorize)
from patchtopo.phantoms import sphere_phantom

N_PER_CLASS = 25
cfg = PatchConfig(patch_size=4, encoder=("stats", ("mean", "std")))

features, labels = [], []
for i in range(2 * N_PER_CLASS):
    hollow = i < N_PER_CLASS
    volume, mask = sphere_phantom(shape=32, hollow=hollow, seed=1000 + i)
    cloud = build_point_cloud(volume, mask, cfg)
    b0, b1, b2 = alpha_persistence(cloud)
    features.append(vectorize(b0, b1, b2))
    labels.append(1 if hollow else 0)
x = np.array(features)
y = np.array(labels)
print(f"dataset: {x.shape[0]} samples x {x.shape[1]} features")

# which features differ most between the classes?
gap = np.abs(x[y == 1].mean(axis=0) - x[y == 0].mean(axis=0))
gap /= x.std(axis=0) + 1e-12
top = np.argsort(gap)[::-1][:5]
print("most separating features:")
for i in top:
    print(f"  {FEATURE_NAMES[i]:24s} standardized gap {gap[i]:.2f}")

for clf in ("lr", "knn"):
    report = cross_validate(x, y, clf, seed=7)
    mean, std = report.mean, report.std
    print(f"{clf}: " + "  ".join(
        f"{name}={m:.1f}±{s:.1f}"
        for name, m, s in zip(("acc", "auc", "sens", "spec", "f1"), mean, std)))
