"""Graphon signal processing with group symmetries."""

from .graphon import (
    CayleyFunction,
    Signal,
    StepGraphon,
    TorusCayleyGraphon,
    cayley_to_step,
    eval_torus,
    model_from_json,
    step_operator_matrix,
    torus_spectrum,
)
from .groups import FiniteGroup, Permutation, TorusPoint, compose, from_cycles, inverse, symmetric_group
from .sampler import SampledGraph, block_signal, sample
from .spectral import (
    EigenCluster,
    Spectrum,
    cluster_eigenvalues,
    discretize_torus,
    eig_sym,
    project,
    shift_operator,
)

__version__ = "0.1.0"
