"""Permutation tableaux: growth process, exact distributions, and limit checks."""

from .clt import ExperimentConfig, ExperimentReport, ks_normal, normalizers, pattern_covariances, run_mc
from .distribution import DistributionTable
from .exact import (
    moment_formulas,
    moments_from_pgfs,
    pgf,
    pgf_first_row,
    pgf_joint_first_unrestricted,
    pgf_rows,
    pgf_superfluous,
    pgf_superfluous_closed,
    pgf_unrestricted,
    distribution_from_pgf,
)
from .growth import (
    JointCountTable,
    SamplerConfig,
    completions_count,
    enumerate_tableaux,
    extensions,
    joint_distribution_dp,
    parent,
    sample_uniform,
)
from .poly import ExactBiPoly, ExactLaurent, ExactPoly
from .tableau import FIGURE1, StatVector, Tableau, TableauError, compute_stats, decode, encode, validate

__version__ = "0.1.0"
