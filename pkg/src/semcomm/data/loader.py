"""Seeded, epoch-aware batch iteration."""

import math
from typing import Iterator

import numpy as np
import torch

from ..core.exceptions import DatasetError
from ..core.utils import derive_seed
from .dataset import CifarSplit
from .transforms import ImageBatch, normalize_pixels


class BatchIterator:
    """Iterate a split in seed-determined shuffled batches.

    The final partial batch is yielded, so every record appears exactly once
    per pass. An iterator holds its own cursor; create one per consumer.

    Args:
        split: Records to iterate.
        batch_size: Images per batch, at least 1.
        seed: Base seed; the shuffle for ``epoch`` uses a seed derived from it.
        epoch: Epoch index selecting the shuffle.
        shuffle: When False, iterate in the view's order.
    """

    def __init__(
        self,
        split: CifarSplit,
        batch_size: int,
        seed: int = 0,
        epoch: int = 0,
        shuffle: bool = True,
    ):
        if batch_size < 1:
            raise DatasetError(f"batch_size must be >= 1, got {batch_size}")
        self.split = split
        self.batch_size = batch_size
        self.seed = seed
        self.epoch = epoch
        self.shuffle = shuffle

    def order(self) -> np.ndarray:
        """Canonical ids in the order this pass visits them."""
        ids = self.split.canonical().indices
        if not self.shuffle:
            return self.split.indices.copy()
        rng = np.random.Generator(np.random.PCG64(derive_seed(self.seed, "epoch", self.epoch)))
        return ids[rng.permutation(len(ids))]

    def __len__(self) -> int:
        """Number of batches, the ceiling of N / batch_size."""
        return math.ceil(len(self.split) / self.batch_size)

    def __iter__(self) -> Iterator[ImageBatch]:
        """Yield normalized batches with labels and record ids."""
        order = self.order()
        for start in range(0, len(order), self.batch_size):
            ids = order[start : start + self.batch_size]
            yield ImageBatch(
                data=normalize_pixels(self.split.pixels[ids]),
                labels=torch.from_numpy(self.split.labels[ids].astype(np.int64)),
                ids=ids,
            )


def batch_iter(split: CifarSplit, batch_size: int, seed: int = 0, epoch: int = 0) -> BatchIterator:
    """Return a shuffled batch iterator for one epoch of ``split``.

    Example:
        >>> len(batch_iter(train_split, 128, seed=0))
        391
    """
    return BatchIterator(split, batch_size=batch_size, seed=seed, epoch=epoch)
