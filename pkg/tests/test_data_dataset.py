"""Tests for semcomm.data.dataset and semcomm.data.loader."""

import numpy as np
import pytest

from semcomm.core.exceptions import DatasetError
from semcomm.data.dataset import SubsetSpec, subset_sample
from semcomm.data.loader import BatchIterator, batch_iter

from conftest import make_split


class TestSubsetSample:
    """Test cases for deterministic subsetting."""

    def test_same_seed_same_subset(self, train_split):
        """Test a seed fixes the drawn ids."""
        a = subset_sample(train_split, SubsetSpec(sample_count=20, seed=3))
        b = subset_sample(train_split, SubsetSpec(sample_count=20, seed=3))

        assert np.array_equal(a.indices, b.indices)

    def test_different_seed_different_subset(self, train_split):
        """Test another seed draws another subset."""
        a = subset_sample(train_split, SubsetSpec(sample_count=20, seed=3))
        b = subset_sample(train_split, SubsetSpec(sample_count=20, seed=4))

        assert not np.array_equal(a.indices, b.indices)

    def test_distinct_canonical_ids(self, train_split):
        """Test the subset holds distinct ids in ascending order."""
        subset = subset_sample(train_split, SubsetSpec(sample_count=25, seed=0))

        assert len(subset) == 25
        assert len(set(subset.indices.tolist())) == 25
        assert np.all(np.diff(subset.indices) > 0)

    def test_stratified_counts(self, train_split):
        """Test stratified draws give each class floor or ceil of count / 10."""
        counts = subset_sample(train_split, SubsetSpec(sample_count=23, seed=1)).class_counts()

        assert counts.sum() == 23
        assert set(counts.tolist()) <= {2, 3}

    def test_unstratified(self, train_split):
        """Test uniform draws still return the requested size."""
        subset = subset_sample(train_split, SubsetSpec(sample_count=17, seed=1, stratified=False))

        assert len(subset) == 17

    def test_full_split(self, train_split):
        """Test drawing everything returns the whole split in canonical order."""
        subset = subset_sample(train_split, SubsetSpec(sample_count=len(train_split), seed=9))

        assert np.array_equal(subset.indices, np.arange(len(train_split)))

    def test_too_many(self, train_split):
        """Test a count above the split size is rejected."""
        with pytest.raises(DatasetError):
            subset_sample(train_split, SubsetSpec(sample_count=len(train_split) + 1))

    @pytest.mark.parametrize("count", [0, 50_001])
    def test_sample_count_bounds(self, count):
        """Test sample counts outside [1, 50000] are rejected."""
        with pytest.raises(DatasetError):
            SubsetSpec(sample_count=count)

    def test_class_too_small(self):
        """Test a stratified draw fails when a class cannot supply its share."""
        split = make_split(20)
        skewed = split.take(np.array([i for i in range(20) if split.labels[i] != 0]))
        with pytest.raises(DatasetError, match="Class 0"):
            subset_sample(skewed, SubsetSpec(sample_count=10))

    def test_arrays_are_read_only(self, train_split):
        """Test splits cannot be mutated in place."""
        with pytest.raises(ValueError):
            train_split.pixels[0, 0, 0, 0] = 1


class TestBatchIterator:
    """Test cases for batch iteration."""

    def test_every_record_once_per_epoch(self, train_split):
        """Test one pass visits every id exactly once, final batch included."""
        batches = list(batch_iter(train_split, batch_size=16, seed=0))
        ids = np.concatenate([b.ids for b in batches])

        assert len(batches) == 4
        assert len(batches[-1]) == len(train_split) - 3 * 16
        assert sorted(ids.tolist()) == list(range(len(train_split)))

    def test_shuffle_depends_on_seed_and_epoch(self, train_split):
        """Test the order is fixed by (seed, epoch)."""
        order = BatchIterator(train_split, 8, seed=1, epoch=0).order()

        assert np.array_equal(order, BatchIterator(train_split, 8, seed=1, epoch=0).order())
        assert not np.array_equal(order, BatchIterator(train_split, 8, seed=1, epoch=1).order())
        assert not np.array_equal(order, BatchIterator(train_split, 8, seed=2, epoch=0).order())

    def test_order_ignores_view_order(self, train_split):
        """Test the shuffle depends on the set of ids, not their listing order."""
        reversed_view = train_split.take(train_split.indices[::-1])

        assert np.array_equal(
            BatchIterator(train_split, 8, seed=5).order(),
            BatchIterator(reversed_view, 8, seed=5).order(),
        )

    def test_unshuffled(self, train_split):
        """Test shuffle=False keeps the view order."""
        batch = next(iter(BatchIterator(train_split, 5, shuffle=False)))

        assert batch.ids.tolist() == [0, 1, 2, 3, 4]
        assert batch.labels.tolist() == [0, 1, 2, 3, 4]

    def test_len(self, train_split):
        """Test the batch count is the ceiling of N / batch_size."""
        assert len(batch_iter(train_split, 7)) == int(np.ceil(len(train_split) / 7))

    def test_invalid_batch_size(self, train_split):
        """Test batch sizes below one are rejected."""
        with pytest.raises(DatasetError):
            batch_iter(train_split, 0)
