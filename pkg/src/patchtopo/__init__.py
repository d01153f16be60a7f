"""Patch-based topological feature extraction for 3D volumetric images.

The pipeline: a masked volume is tiled into cubic patches, each patch
becomes a d-dimensional point (Morton-encoded center + intensity
statistics or PCA components), persistent homology of the point cloud is
computed via the alpha filtration (with a cubical-complex baseline), and
barcodes are vectorized into fixed-length feature vectors for a
cross-validated classifier.
"""

from .alpha import AlphaFiltration, alpha_persistence, alpha_values, delaunay
from .bench import BenchReport, bench_ph
from .cubical import cubical_filtration, cubical_persistence
from .errors import DataError, NumericalError, PatchTopoError
from .features import FEATURE_NAMES, N_FEATURES, vectorize
from .io import (Mask, Volume, load_barcode, load_features, load_mask,
                 load_point_cloud, load_volume, save_barcode, save_features,
                 save_mask, save_point_cloud, save_volume)
from .ml import (CVReport, cross_validate, compute_metrics, enumerate_pca_trials,
                 enumerate_stats_trials, stratified_kfold, top_fraction,
                 train_predict, zscore_apply, zscore_fit)
from .patches import (PATCH_SIZES, STAT_NAMES, Patch, PatchConfig, PointCloud,
                      build_point_cloud, extract_patches, morton_decode,
                      morton_encode, patch_stats, pca_fit_transform)
from .persistence import Barcode, FilteredComplex, barcode_entropy, compute_persistence
from .preprocess import average_spacing, mask_and_crop, resample

__version__ = "0.1.0"

__all__ = [
    "AlphaFiltration", "Barcode", "BenchReport", "CVReport", "DataError",
    "FEATURE_NAMES", "FilteredComplex", "Mask", "N_FEATURES", "NumericalError",
    "PATCH_SIZES", "Patch", "PatchConfig", "PatchTopoError", "PointCloud",
    "STAT_NAMES", "Volume", "alpha_persistence", "alpha_values",
    "average_spacing", "barcode_entropy", "bench_ph", "build_point_cloud",
    "compute_metrics", "compute_persistence", "cross_validate",
    "cubical_filtration", "cubical_persistence", "delaunay",
    "enumerate_pca_trials", "enumerate_stats_trials", "extract_patches",
    "load_barcode", "load_features", "load_mask", "load_point_cloud",
    "load_volume", "mask_and_crop", "morton_decode", "morton_encode",
    "patch_stats", "pca_fit_transform", "resample", "save_barcode",
    "save_features", "save_mask", "save_point_cloud", "save_volume",
    "stratified_kfold", "top_fraction", "train_predict", "vectorize",
    "zscore_apply", "zscore_fit",
]
