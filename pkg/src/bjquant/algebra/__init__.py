"""Exact operator algebra in X, P with [X, P] = i*hbar."""
from .oppoly import (
    MAX_DEGREE,
    OpPoly,
    anticommutator,
    commutator,
    format_oppoly,
    formal_adjoint,
    multiply,
    normal_order_word,
    parse_oppoly,
    word,
)
from .ordering import (
    BORN_JORDAN,
    WEYL,
    QuantScheme,
    Tau,
    beta_average_coefficient,
    beta_averaged_tau_rule,
    crehan_hamiltonian,
    crehan_operator_spectrum,
    crehan_spectrum,
    mixed_commutator,
    printed_mixed_commutator,
    quantize_monomial,
    quantize_polynomial,
)
from .rings import HbarPoly, QQi

__all__ = [
    "MAX_DEGREE", "OpPoly", "anticommutator", "commutator", "format_oppoly", "formal_adjoint",
    "multiply", "normal_order_word", "parse_oppoly", "word", "BORN_JORDAN", "WEYL", "QuantScheme",
    "Tau", "beta_average_coefficient", "beta_averaged_tau_rule", "crehan_hamiltonian",
    "crehan_operator_spectrum", "crehan_spectrum", "mixed_commutator", "printed_mixed_commutator",
    "quantize_monomial", "quantize_polynomial", "HbarPoly", "QQi",
]
