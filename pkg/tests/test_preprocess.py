import numpy as np
import pytest

from patchtopo.errors import DataError, NumericalError
from patchtopo.io import Mask, Volume
from patchtopo.preprocess import average_spacing, mask_and_crop, resample


def test_resample_identity():
    rng = np.random.default_rng(0)
    v = Volume(data=rng.random((4, 6, 5), dtype=np.float32), spacing=(1.5, 0.8, 0.8))
    out = resample(v, v.spacing)
    assert out.dims == v.dims
    assert np.array_equal(out.data, v.data)


def test_resample_constant():
    v = Volume(data=np.full((5, 5, 5), 42.0, dtype=np.float32), spacing=(1, 1, 1))
    out = resample(v, (2.3, 0.6, 1.7))
    assert np.allclose(out.data, 42.0)


def test_resample_ramp_matches_linear_interpolation():
    # values 0..9 along x, resampled 2x coarser: sample at x = 0,2,4,6,8
    data = np.tile(np.arange(10, dtype=np.float32), (1, 1, 1))
    v = Volume(data=data, spacing=(1, 1, 1))
    out = resample(v, (1, 1, 2))
    assert out.dims == (1, 1, 5)
    assert np.allclose(out.data[0, 0], [0, 2, 4, 6, 8])
    # non-integer positions: target 1.5 -> x = 0, 1.5, 3.0, ... analytic ramp
    out = resample(v, (1, 1, 1.5))
    expect = np.minimum(np.arange(out.dims[2]) * 1.5, 9.0)
    assert np.allclose(out.data[0, 0], expect)


def test_resample_idempotent():
    rng = np.random.default_rng(1)
    v = Volume(data=rng.random((6, 7, 8), dtype=np.float32), spacing=(1.3, 0.9, 1.1))
    once = resample(v, (1.0, 1.0, 1.0))
    twice = resample(once, (1.0, 1.0, 1.0))
    assert np.array_equal(once.data, twice.data)


def test_resample_preserves_extent():
    rng = np.random.default_rng(2)
    for _ in range(10):
        dims = tuple(rng.integers(3, 20, 3))
        spacing = tuple(rng.uniform(0.5, 3.0, 3))
        target = tuple(rng.uniform(0.5, 3.0, 3))
        v = Volume(data=np.zeros(dims, dtype=np.float32), spacing=spacing)
        out = resample(v, target)
        for a in range(3):
            assert abs(out.dims[a] * target[a] - dims[a] * spacing[a]) <= target[a]


def test_resample_rejects_bad_spacing():
    v = Volume(data=np.zeros((2, 2, 2), dtype=np.float32), spacing=(1, 1, 1))
    with pytest.raises(DataError):
        resample(v, (0.0, 1, 1))


def test_mask_and_crop_full_mask():
    rng = np.random.default_rng(3)
    v = Volume(data=rng.random((4, 5, 6), dtype=np.float32), spacing=(1, 1, 1))
    m = Mask(data=np.ones(v.dims, dtype=np.uint8))
    out, mout, offset = mask_and_crop(v, m, pad=0)
    assert out.dims == v.dims and offset == (0, 0, 0)
    assert np.array_equal(out.data, v.data)
    assert np.array_equal(mout.data, m.data)


def test_mask_and_crop_single_voxel():
    v = Volume(data=np.zeros((5, 5, 5), dtype=np.float32), spacing=(1, 1, 1))
    m = np.zeros((5, 5, 5), dtype=np.uint8)
    m[2, 2, 2] = 1
    out, mout, offset = mask_and_crop(v, Mask(data=m), pad=1)
    assert out.dims == (3, 3, 3)
    assert offset == (1, 1, 1)
    assert mout.data[1, 1, 1] == 1 and mout.data.sum() == 1


def test_mask_and_crop_fill_below_roi_min():
    rng = np.random.default_rng(4)
    v = Volume(data=rng.random((6, 6, 6), dtype=np.float32) * 100 - 50, spacing=(1, 1, 1))
    m = np.zeros(v.dims, dtype=np.uint8)
    m[1:4, 2:5, 1:3] = 1
    out, mout, _ = mask_and_crop(v, Mask(data=m), pad=2)
    roi_min = v.data[m.astype(bool)].min()
    background = out.data[~mout.data.astype(bool)]
    assert np.all(background == np.float32(roi_min - 1.0))
    assert np.all(out.data[mout.data.astype(bool)] >= roi_min)


def test_mask_and_crop_keeps_all_roi_voxels():
    rng = np.random.default_rng(5)
    for trial in range(5):
        v = Volume(data=rng.random((7, 8, 9), dtype=np.float32), spacing=(1, 1, 1))
        m = (rng.random(v.dims) < 0.1).astype(np.uint8)
        if not m.any():
            m[3, 4, 5] = 1
        out, mout, offset = mask_and_crop(v, Mask(data=m), pad=int(rng.integers(0, 3)))
        assert mout.data.sum() == m.sum()
        roi_vals_in = np.sort(v.data[m.astype(bool)])
        roi_vals_out = np.sort(out.data[mout.data.astype(bool)])
        assert np.array_equal(roi_vals_in, roi_vals_out)


def test_mask_and_crop_rejects_empty_mask():
    v = Volume(data=np.zeros((2, 2, 2), dtype=np.float32), spacing=(1, 1, 1))
    with pytest.raises(NumericalError):
        mask_and_crop(v, Mask(data=np.zeros((2, 2, 2), dtype=np.uint8)))


def test_average_spacing():
    v1 = Volume(data=np.zeros((1, 1, 1), dtype=np.float32), spacing=(1, 1, 1))
    v2 = Volume(data=np.zeros((1, 1, 1), dtype=np.float32), spacing=(3, 1, 1))
    assert average_spacing([v1]) == (1, 1, 1)
    assert average_spacing([v1, v2]) == (2, 1, 1)
    with pytest.raises(DataError):
        average_spacing([])
