"""Differential-operator algebra and the quantization maps."""

from .maps import (
    QuantizationError,
    QuantizationMap,
    dirac_defect,
    heisenberg_derivative,
    prequantize_t,
    prequantize_v,
    quadratic_parts,
    quantize,
    quantize_quadratic,
    schrodinger_quantize,
)
from .operators import DiffOperator, VarSet, op_commutator, op_compose, op_formal_adjoint

__all__ = [
    "DiffOperator",
    "QuantizationError",
    "QuantizationMap",
    "VarSet",
    "dirac_defect",
    "heisenberg_derivative",
    "op_commutator",
    "op_compose",
    "op_formal_adjoint",
    "prequantize_t",
    "prequantize_v",
    "quadratic_parts",
    "quantize",
    "quantize_quadratic",
    "schrodinger_quantize",
]
