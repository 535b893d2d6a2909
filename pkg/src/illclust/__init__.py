"""Clustering as an ill-posed inverse problem.

Reduces a variables-by-samples matrix (first EMD mode, PCA with Kaiser or
Wishart component selection), clusters the samples with K-Means, selects
the cluster count by the Davies-Bouldin index, and tests how the optimal
cluster count tracks the informative component count.
"""

from .config import PipelineConfig, load_config, save_config
from .emd import EmdDecomposition, FirstImfMatrix, decompose, first_imf_matrix
from .experiment import (
    DingHeBoundCheck,
    ExperimentReport,
    TheoremVerdict,
    Variant,
    VariantResult,
    check_ding_he_bound,
    generate_smooth_synthetic,
    generate_synthetic,
    run_experiment,
    run_variant,
    theorem_test,
)
from .io import export_plot_data, read_csv, report_dict, write_csv, write_report
from .kmeans import Partition, kmeans, lloyd_step
from .matrix import (
    ConditionReport,
    DataMatrix,
    EigenSpectrum,
    condition_number,
    correlation_matrix,
    singular_values,
    standardize,
    symmetric_eigen,
)
from .pca import (
    PcaReduction,
    WishartBound,
    mp_density,
    project,
    select_kaiser,
    select_wishart,
    wishart_bound,
)
from .validity import (
    DbParams,
    SweepResult,
    centroid_distance,
    cluster_dispersion,
    davies_bouldin,
    sweep_optimal_k,
)

__version__ = "0.1.0"
