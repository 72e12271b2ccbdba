"""Weyl, Born-Jordan and Shubin quantization on a 1-D phase-space grid.

The numerical side works on a centered grid of ``N`` points; the symbolic
side (:mod:`bjquant.algebra`) is exact over the Gaussian rationals.
"""
from .distributions import (
    DEFAULT_RULE,
    InterferenceRegion,
    QuadratureRule,
    ambiguity,
    bjw_filtered,
    bjw_quadrature,
    born_jordan_wigner,
    cross_wigner,
    cross_wigner_tau,
    interference_energy,
    marginals,
    rihaczek,
    theta_filter,
    wigner,
)
from .errors import BoundaryMassWarning, GridMismatchError, NumericalError
from .grid import (
    Grid1D,
    PhaseFunction,
    PhaseGrid,
    SampledSignal,
    hbar_fourier,
    inner_product,
    inverse_hbar_fourier,
    make_phase_grid,
    phase_pairing,
    sample_function,
    symplectic_fourier,
)
from .metaplectic import (
    J,
    ML,
    VP,
    MetaGenerator,
    SympMat2,
    covariance_defect,
    meta_inverse_matrix,
    meta_matrix,
    project,
    pullback_symbol,
    symplectic_of,
    theta_invariance,
)
from .pseudodiff import (
    OperatorMatrix,
    apply,
    heisenberg_weyl,
    kernel_bj,
    kernel_tau,
    kernel_weyl,
    op_from_twist,
    pairing_check,
    quantize,
)
from .signals import SignalSpec, generate_signal
from .uncertainty import (
    CovarianceReport,
    MixedState,
    Observable,
    covariance,
    covariance_matrix,
    expectation,
    expectation_via_symbol,
    rs_check,
    rs_matrix_check,
    state_symbol,
    variance,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryMassWarning",
    "GridMismatchError",
    "NumericalError",
    "SignalSpec",
    "generate_signal",
    "DEFAULT_RULE",
    "InterferenceRegion",
    "QuadratureRule",
    "ambiguity",
    "bjw_filtered",
    "bjw_quadrature",
    "born_jordan_wigner",
    "cross_wigner",
    "cross_wigner_tau",
    "interference_energy",
    "marginals",
    "rihaczek",
    "theta_filter",
    "wigner",
    "Grid1D",
    "PhaseFunction",
    "PhaseGrid",
    "SampledSignal",
    "hbar_fourier",
    "inner_product",
    "inverse_hbar_fourier",
    "make_phase_grid",
    "phase_pairing",
    "sample_function",
    "symplectic_fourier",
    "J",
    "ML",
    "VP",
    "MetaGenerator",
    "SympMat2",
    "covariance_defect",
    "meta_inverse_matrix",
    "meta_matrix",
    "project",
    "pullback_symbol",
    "symplectic_of",
    "theta_invariance",
    "OperatorMatrix",
    "apply",
    "heisenberg_weyl",
    "kernel_bj",
    "kernel_tau",
    "kernel_weyl",
    "op_from_twist",
    "pairing_check",
    "quantize",
    "CovarianceReport",
    "MixedState",
    "Observable",
    "covariance",
    "covariance_matrix",
    "expectation",
    "expectation_via_symbol",
    "rs_check",
    "rs_matrix_check",
    "state_symbol",
    "variance",
]
