"""Bessel and q-Bessel transforms, multiresolution filter banks, Cuntz
representations, a q-Markov chain and the SO_q(N) braid operator."""

__version__ = "0.1.0"

from . import (  # noqa: E402
    bwm_quantum,
    cuntz_rep,
    frames,
    markov_chain,
    mra_filters,
    q_calculus,
    special_functions,
    transforms,
)
from .kernels import BACKEND  # noqa: E402

__all__ = [
    "BACKEND",
    "bwm_quantum",
    "cuntz_rep",
    "frames",
    "markov_chain",
    "mra_filters",
    "q_calculus",
    "special_functions",
    "transforms",
]
