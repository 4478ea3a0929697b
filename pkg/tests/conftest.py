import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def camera_pgm(tmp_path_factory):
    """Cameraman at its classic 256x256 size (2x2 block mean of skimage's 512x512)."""
    data = pytest.importorskip("skimage.data")
    from kerdockcs.pgm import write_pgm

    img = data.camera().astype(float).reshape(256, 2, 256, 2).mean(axis=(1, 3)) / 255.0
    path = tmp_path_factory.mktemp("img") / "camera256.pgm"
    write_pgm(img, path)
    return path
