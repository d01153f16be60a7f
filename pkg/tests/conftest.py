import json

import numpy as np
import pytest

from patchtopo.io import Mask, Volume, save_mask, save_volume


@pytest.fixture
def make_manifest(tmp_path):
    """Write n small phantom volume/mask pairs and a manifest; returns its path.

    Classes alternate hollow/solid ball ROIs so a binary task exists.
    """

    def build(n_samples=10, shape=12, seed=0):
        rng = np.random.default_rng(seed)
        entries = []
        for i in range(n_samples):
            hollow = i % 2 == 0
            center = shape / 2 + rng.uniform(-1, 1, 3)
            r_out = shape * rng.uniform(0.3, 0.4)
            r_in = r_out * 0.5 if hollow else 0.0
            zz, yy, xx = np.meshgrid(*(np.arange(shape),) * 3, indexing="ij")
            dist = np.sqrt((zz - center[0]) ** 2 + (yy - center[1]) ** 2
                           + (xx - center[2]) ** 2)
            roi = (dist <= r_out) & (dist >= r_in)
            data = rng.normal(0, 10, (shape,) * 3).astype(np.float32)
            data[roi] += 100
            save_volume(Volume(data=data, spacing=(1, 1, 1)), tmp_path / f"v{i}.json")
            save_mask(Mask(data=roi), tmp_path / f"m{i}.json")
            entries.append({"volume": f"v{i}.json", "mask": f"m{i}.json",
                            "label": "hollow" if hollow else "solid", "id": f"s{i}"})
        manifest = tmp_path / "manifest.json"
        manifest.write_text(json.dumps(entries))
        return manifest

    return build
