"""Exact combinatorics for Erdos-Ko-Rado problems on subset partitions."""
from .core import (
    Family,
    KClass,
    SubPartition,
    UniverseParams,
    binomial,
    canonical_family_size,
    common_classes,
    count_subpartitions,
    enumerate_subpartitions,
    format_subpartition,
    is_dominating,
    is_t_intersecting,
    make_canonical_family,
    parse_subpartition,
    shared_class_count,
)

__version__ = "0.1.0"
