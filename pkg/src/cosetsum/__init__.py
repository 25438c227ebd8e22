"""Coset sum construction of multivariate biorthogonal wavelet filter banks."""

from .analysis import (
    AccuracyReport,
    CheckResult,
    MomentCapError,
    accuracy_number,
    is_biorthogonal,
    is_interpolatory,
    muep_verify,
    vanishing_moments,
)
from .catalog import daubechies2, dd_dual, deslauriers_dubuc, haar, linear_spline
from .constructors import CosetReps, coset_sum, coset_sum_general, hybrid, tensor_product
from .dyadic import Dyadic
from .errors import DimensionError, PreconditionError, ScalarKindError, SupportLimitError
from .mask import EXACT, FLOAT, Mask
from .system import (
    WaveletSystem,
    build_1d_system,
    build_coset_system,
    build_tensor_system,
    compute_dual_wavelet_masks,
)
from .transform import (
    OpCounter,
    Pyramid,
    coset_decompose,
    coset_reconstruct,
    measured_complexity,
    tensor_decompose,
    tensor_reconstruct,
)

__all__ = [
    "AccuracyReport",
    "CheckResult",
    "CosetReps",
    "DimensionError",
    "Dyadic",
    "EXACT",
    "FLOAT",
    "Mask",
    "MomentCapError",
    "OpCounter",
    "PreconditionError",
    "Pyramid",
    "ScalarKindError",
    "SupportLimitError",
    "WaveletSystem",
    "accuracy_number",
    "build_1d_system",
    "build_coset_system",
    "build_tensor_system",
    "compute_dual_wavelet_masks",
    "coset_decompose",
    "coset_reconstruct",
    "coset_sum",
    "coset_sum_general",
    "daubechies2",
    "dd_dual",
    "deslauriers_dubuc",
    "haar",
    "hybrid",
    "is_biorthogonal",
    "is_interpolatory",
    "linear_spline",
    "measured_complexity",
    "muep_verify",
    "tensor_decompose",
    "tensor_product",
    "tensor_reconstruct",
    "vanishing_moments",
]
