"""Random signed graphs, signed Laplacian spectra and the sgn(u1) estimator."""

from .errors import EdgeListError, SizeLimitError, ValidationError
from .experiments import ExperimentConfig, ExperimentRecord, run_sweep, run_trial, summarize
from .frustration import (
    eta1_balance_bruteforce,
    eta1_index_bruteforce,
    eta2,
    eta2_index_bruteforce,
    misclassification,
    sign_estimator,
)
from .graphcore import (
    adjacency,
    degrees,
    normalized_laplacian,
    read_edgelist,
    unnormalized_laplacian,
    unsigned_adjacency,
    write_edgelist,
)
from .models import (
    BisectionSpec,
    BlockSpec,
    ProbabilityMatrix,
    bisection_to_blocks,
    closed_form_mean,
    expand_blocks,
    mean_adjacency,
)
from .sampler import Seed, SignedGraph, sample, sample_bisection
from .spectra import alignment, eigendecompose, operator_norm_diff

__version__ = "0.1.0"
