"""Calibrated cluster validation indexes, baseline clusterers, and the
benchmark pipeline. Thin wrapper around the C++ extension module."""

from clusterval._core import (
    ClusteringResult,
    Dataset,
    Dendrogram,
    DistanceMatrix,
    Partition,
    calibrate,
    cut,
    dataset,
    dmode_aggregate,
    euclidean_distances,
    external_indexes,
    external_indexes_from_table,
    generate_ensemble,
    hclust,
    impute_mean,
    ingest_partition,
    internal_indexes,
    kmeans,
    load_csv,
    pam,
    run_benchmark,
    scale_zscore,
    validate_partition,
)

__all__ = [
    "ClusteringResult",
    "Dataset",
    "Dendrogram",
    "DistanceMatrix",
    "Partition",
    "calibrate",
    "cut",
    "dataset",
    "dmode_aggregate",
    "euclidean_distances",
    "external_indexes",
    "external_indexes_from_table",
    "generate_ensemble",
    "hclust",
    "impute_mean",
    "ingest_partition",
    "internal_indexes",
    "kmeans",
    "load_csv",
    "pam",
    "run_benchmark",
    "scale_zscore",
    "validate_partition",
]

__version__ = "0.1.0"
