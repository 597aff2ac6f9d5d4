"""Weyl symbols of the Hermite operator H = -Laplacian + |x|^2.

Numerics for the heat-semigroup symbol, the symbols of the fractional
inverse powers H^{-s} and of the conformally invariant fractional
inverses, a 1-D Weyl quantization engine with a Hermite spectral oracle,
and executable verification of the derivative (Gevrey-type) estimates.
"""

from .quadrature import IntegralResult, QuadratureSpec, integrate_finite, integrate_mehler
from .special import AccuracyError, MultiIndex, hermite_h, laguerre, macdonald_k
from .symbols import PhasePoint, SymbolSpec, symbol_value
from .quantize import GridFunction, GridSpec, OperatorKernel

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "AccuracyError",
    "MultiIndex",
    "PhasePoint",
    "SymbolSpec",
    "QuadratureSpec",
    "IntegralResult",
    "GridSpec",
    "GridFunction",
    "OperatorKernel",
    "hermite_h",
    "laguerre",
    "macdonald_k",
    "integrate_finite",
    "integrate_mehler",
    "symbol_value",
]
