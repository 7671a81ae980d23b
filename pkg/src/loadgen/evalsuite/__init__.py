"""Statistical validation battery for generated load profiles."""

from loadgen.evalsuite.sampleset import SampleSet, load_sample_set, save_sample_set
from loadgen.evalsuite.ks import KsReport, ks_per_dimension, ks_two_sample
from loadgen.evalsuite.energy import EnergyReport, energy_distance, energy_statistic
from loadgen.evalsuite.ae_test import (
    Autoencoder,
    AutoencoderConfig,
    ae_recon_errors,
    train_reference_ae,
)
from loadgen.evalsuite.clustering import (
    ClusterReport,
    assign_clusters,
    cluster_compare,
    kmeans_fit,
)
from loadgen.evalsuite.cdf import (
    CDF_GRID_POINTS,
    cdf_columns,
    cdf_grid,
    ecdf_on_grid,
    group_values,
    mean_profile_table,
)

__all__ = [
    "Autoencoder",
    "AutoencoderConfig",
    "CDF_GRID_POINTS",
    "ClusterReport",
    "EnergyReport",
    "KsReport",
    "SampleSet",
    "ae_recon_errors",
    "assign_clusters",
    "cdf_columns",
    "cdf_grid",
    "cluster_compare",
    "ecdf_on_grid",
    "energy_distance",
    "energy_statistic",
    "group_values",
    "kmeans_fit",
    "ks_per_dimension",
    "ks_two_sample",
    "load_sample_set",
    "mean_profile_table",
    "save_sample_set",
    "train_reference_ae",
]
