"""
Dataset ingestion: acquisition, parsing, normalization, subsetting, batching.

Example:
    >>> from semcomm.data import fetch_dataset, subset_sample, SubsetSpec, batch_iter
    >>> handle = fetch_dataset()
    >>> train = subset_sample(handle.load_train(), SubsetSpec(sample_count=1000, seed=7))
    >>> for batch in batch_iter(train, batch_size=128, seed=7):
    ...     ...
"""

from .dataset import CifarSplit, SubsetSpec, load_split, subset_sample
from .fetch import (
    DatasetHandle,
    fetch_dataset,
    inspect_shards,
    open_dataset,
    verify_archive,
    verify_dataset,
)
from .loader import BatchIterator, batch_iter
from .records import RawRecord, encode_record, parse_record, parse_shard, read_shard
from .transforms import ImageBatch, denormalize, normalize, normalize_pixels

__all__ = [
    "BatchIterator",
    "CifarSplit",
    "DatasetHandle",
    "ImageBatch",
    "RawRecord",
    "SubsetSpec",
    "batch_iter",
    "denormalize",
    "encode_record",
    "fetch_dataset",
    "inspect_shards",
    "load_split",
    "normalize",
    "normalize_pixels",
    "open_dataset",
    "parse_record",
    "parse_shard",
    "read_shard",
    "subset_sample",
    "verify_archive",
    "verify_dataset",
]
