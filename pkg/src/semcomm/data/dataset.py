"""Parsed dataset splits and deterministic subsetting."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..core.config import DatasetConstants
from ..core.exceptions import DatasetError
from ..core.utils import derive_seed
from .records import read_shard

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CifarSplit:
    """An immutable, indexable view over parsed records.

    ``pixels`` and ``labels`` hold the whole parsed split; ``indices`` selects
    the records this view exposes. Subsets share the parent's arrays.

    Attributes:
        name: Split name ("train" or "test").
        pixels: uint8 array (N, 3, 32, 32).
        labels: uint8 array (N,).
        indices: int64 canonical ids of the records in this view.
        digest: Digest of the source archive, when known.
    """

    name: str
    pixels: np.ndarray
    labels: np.ndarray
    indices: np.ndarray = field(default=None)  # type: ignore[assignment]
    digest: Optional[str] = None

    def __post_init__(self) -> None:
        """Default to the full split and freeze the backing arrays."""
        if self.indices is None:
            object.__setattr__(self, "indices", np.arange(len(self.labels), dtype=np.int64))
        for array in (self.pixels, self.labels, self.indices):
            array.flags.writeable = False

    def __len__(self) -> int:
        """Number of records in this view."""
        return int(len(self.indices))

    @property
    def view_labels(self) -> np.ndarray:
        """Labels of the records in this view, in view order."""
        return self.labels[self.indices]

    def take(self, indices: np.ndarray) -> "CifarSplit":
        """Return a view over the given canonical ids."""
        return CifarSplit(
            name=self.name,
            pixels=self.pixels,
            labels=self.labels,
            indices=np.asarray(indices, dtype=np.int64),
            digest=self.digest,
        )

    def canonical(self) -> "CifarSplit":
        """Return this view with ids in ascending order."""
        return self.take(np.sort(self.indices))

    def class_counts(self) -> np.ndarray:
        """Per-class record counts of this view."""
        return np.bincount(self.view_labels, minlength=DatasetConstants.NUM_CLASSES)


@dataclass(frozen=True)
class SubsetSpec:
    """How to draw a training subset.

    Attributes:
        sample_count: Number of records, 1 <= sample_count <= 50,000.
        seed: Seed for the draw.
        stratified: Draw equal counts per class (within one).
    """

    sample_count: int
    seed: int = 0
    stratified: bool = True

    def __post_init__(self) -> None:
        """Validate the sample count."""
        if not 1 <= self.sample_count <= DatasetConstants.TRAIN_RECORDS:
            raise DatasetError(
                f"sample_count must be in [1, {DatasetConstants.TRAIN_RECORDS}], "
                f"got {self.sample_count}"
            )


def load_split(directory: Path, shards: Sequence[str], name: str, digest: Optional[str] = None) -> CifarSplit:
    """Parse shard files into a single split.

    Args:
        directory: Directory containing the shard files.
        shards: Shard file names, concatenated in this order.
        name: Split name.
        digest: Archive digest to carry along for manifests.

    Returns:
        The parsed split with canonical ids 0..N-1.
    """
    labels, pixels = [], []
    for shard in shards:
        path = directory / shard
        if not path.is_file():
            raise DatasetError(f"Missing shard {path}")
        shard_labels, shard_pixels = read_shard(path)
        labels.append(shard_labels)
        pixels.append(shard_pixels)
    split = CifarSplit(
        name=name,
        pixels=np.concatenate(pixels),
        labels=np.concatenate(labels),
        digest=digest,
    )
    logger.info(f"Parsed {name} split: {len(split)} records from {len(shards)} shard(s)")
    return split


def subset_sample(split: CifarSplit, spec: SubsetSpec) -> CifarSplit:
    """Draw a deterministic subset of a split.

    The subset is returned in canonical (ascending id) order. Drawing the
    whole split returns it unchanged apart from canonical ordering.

    Args:
        split: Source split or view.
        spec: Subset size, seed and sampling mode.

    Returns:
        A view with exactly ``spec.sample_count`` distinct records.

    Raises:
        DatasetError: If the split is too small, or a class cannot supply its
            stratified share.
    """
    count = spec.sample_count
    if count > len(split):
        raise DatasetError(f"sample_count {count} exceeds split size {len(split)}")
    if count == len(split):
        return split.canonical()

    rng = np.random.Generator(np.random.PCG64(derive_seed(spec.seed, "subset", count)))
    if not spec.stratified:
        chosen = rng.choice(split.indices, size=count, replace=False)
        return split.take(np.sort(chosen))

    ordered = split.canonical()
    labels = ordered.view_labels
    classes = np.arange(DatasetConstants.NUM_CLASSES)
    quota = np.full(len(classes), count // len(classes), dtype=np.int64)
    extra = rng.choice(classes, size=count % len(classes), replace=False)
    quota[extra] += 1

    chosen_parts = []
    for cls in classes:
        members = ordered.indices[labels == cls]
        if quota[cls] > len(members):
            raise DatasetError(
                f"Class {cls} has {len(members)} records, stratified draw needs {quota[cls]}"
            )
        chosen_parts.append(rng.choice(members, size=int(quota[cls]), replace=False))
    return split.take(np.sort(np.concatenate(chosen_parts)))
