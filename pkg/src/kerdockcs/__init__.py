"""Deterministic multi-scale +-1 compressive imaging with Kerdock matrices."""

from .codes import SignSet, build_sign_set, eval_form_signs, gf2_rank
from .estimators import HaarTransformer, KerdockSampler, MultiscaleSampler, WalshHadamardTransformer
from .kerdock import KerdockParams, frame_gram_check, kerdock_adjoint, kerdock_forward
from .multiscale import (
    LowFrequencyWHT,
    MultiscaleOperator,
    RandomWHT,
    gram_diagonal,
    sample_multiscale,
    validate_strategy,
)
from .operator import LinearOperator
from .solver import SolverConfig, snr, solve_bp
from .transforms import fwht_paley, haar_forward, haar_inverse, hadamard_haar_blocks, transform_2d

__version__ = "0.1.0"

__all__ = [
    "SignSet",
    "build_sign_set",
    "eval_form_signs",
    "gf2_rank",
    "HaarTransformer",
    "KerdockSampler",
    "MultiscaleSampler",
    "WalshHadamardTransformer",
    "KerdockParams",
    "frame_gram_check",
    "kerdock_adjoint",
    "kerdock_forward",
    "LowFrequencyWHT",
    "MultiscaleOperator",
    "RandomWHT",
    "gram_diagonal",
    "sample_multiscale",
    "validate_strategy",
    "LinearOperator",
    "SolverConfig",
    "snr",
    "solve_bp",
    "fwht_paley",
    "haar_forward",
    "haar_inverse",
    "hadamard_haar_blocks",
    "transform_2d",
]
