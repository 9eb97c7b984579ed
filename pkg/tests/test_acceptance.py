"""End-to-end checks against the real dataset.

These tests need the archive in $SEMCOMM_DATA_DIR (run ``semcomm data-fetch``
first) and are skipped otherwise. Select them with ``-m integration``; the
full sweeps are additionally marked slow.
"""

import numpy as np
import pytest

from semcomm.core.exceptions import SemcommError
from semcomm.data.dataset import SubsetSpec, subset_sample
from semcomm.data.fetch import open_dataset
from semcomm.data.transforms import normalize_pixels
from semcomm.experiments.config import SweepSpec
from semcomm.experiments.runner import run_nasar_sweep, run_samples_sweep
from semcomm.model.autoencoder import init_params
from semcomm.training.config import TrainingConfig
from semcomm.training.trainer import dataset_loss, train

pytestmark = pytest.mark.integration


@pytest.fixture
def dataset():
    """Verified handle to the cached dataset."""
    try:
        return open_dataset()
    except SemcommError as e:
        pytest.skip(f"Dataset not available: {e}")


class TestIngestion:
    """Dataset ingestion on the real archive."""

    def test_record_counts_and_labels(self, dataset):
        """Test 50,000 training and 10,000 test records with labels in [0, 9]."""
        train_split, test_split = dataset.load_train(), dataset.load_test()

        assert len(train_split) == 50000
        assert len(test_split) == 10000
        assert int(train_split.labels.max()) <= 9
        assert np.all(train_split.class_counts() == 5000)

    def test_normalization_endpoints(self):
        """Test byte 0 maps to -1 and byte 255 to +1."""
        pixels = np.zeros((1, 3, 32, 32), dtype=np.uint8)
        pixels[0, 0, 0, 0] = 255
        normalized = normalize_pixels(pixels)

        assert normalized[0, 0, 0, 0].item() == 1.0
        assert normalized[0, 1, 0, 0].item() == -1.0


class TestSmokeTraining:
    """Short training runs on real images."""

    def test_one_epoch_beats_initialization(self, dataset):
        """Test one epoch on 512 images lowers the loss on those images."""
        config = TrainingConfig(epochs=1, sample_count=512, seed=7)
        split = dataset.load_train()
        subset = subset_sample(split, SubsetSpec(sample_count=512, seed=7, stratified=True))

        before = dataset_loss(init_params(seed=7), subset, config)
        checkpoint = train(config, split)

        assert checkpoint.loss_trace.total[-1] < before

    def test_bitwise_reproducible(self, dataset):
        """Test two identical runs give identical checkpoints."""
        config = TrainingConfig(epochs=1, sample_count=512, seed=7)
        split = dataset.load_train()

        assert train(config, split).digest() == train(config, split).digest()


@pytest.mark.slow
class TestSweeps:
    """Full-default sweeps; hours on CPU."""

    def test_nasar_sweep_trend(self, dataset):
        """Test PSNR falls with NASAR and SSL trails SL by a shrinking gap."""
        result = run_nasar_sweep(SweepSpec(kind="nasar"), dataset.load_train(), dataset.load_test())
        gaps = [p.gap for p in result.points]

        for earlier, later in zip(result.points, result.points[1:]):
            assert later.ssl.mean_psnr < earlier.ssl.mean_psnr
            assert later.sl.mean_psnr < earlier.sl.mean_psnr
        assert 2.0 <= gaps[0] <= 9.0
        assert 1.0 <= gaps[-1] <= 7.0
        assert gaps[0] > gaps[-1]

    def test_samples_sweep_trend(self, dataset):
        """Test the gap narrows by at least two points as the subset grows."""
        result = run_samples_sweep(SweepSpec(kind="samples"), dataset.load_train(), dataset.load_test())
        gaps = [p.gap for p in result.points]

        assert gaps[0] - gaps[-1] >= 2.0
        for tag in ("ssl", "sl"):
            psnrs = [getattr(p, tag).mean_psnr for p in result.points]
            assert sum(b < a for a, b in zip(psnrs, psnrs[1:])) <= 1
