"""Weyl quantization on a 1-D grid and the Hermite spectral oracle.

A radial symbol b(rho) is turned into the dense kernel

    K(xi_i, eta_j) = (2 pi)^{-1} int e^{i (xi_i - eta_j) y}
                                   b(((xi_i + eta_j)/2)^2 + y^2) dy,

with the y-integral evaluated by a fixed composite Gauss-Legendre rule
over |y| <= Y_cut = L whose panel width resolves the largest grid
frequency.  Entries are grouped by anti-diagonal (constant midpoint), so
one radial profile evaluation serves a whole row of frequencies; the
profile of quadrature-backed families is tabulated once on Chebyshev
nodes and evaluated by Clenshaw recurrence during assembly.

The spectral oracle expands a grid function in normalized Hermite
functions, applies a multiplier in the eigenvalue 2k+n, and resums; it
is the ground truth every quantized kernel is compared against.

Kernel rows may be assembled in parallel (HW_THREADS); every entry is
computed independently, so results are identical for any worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec
from .special import gamma_ratio
from .symbols import SymbolSpec, symbol_value

__all__ = [
    "GridSpec",
    "GridFunction",
    "OperatorKernel",
    "worker_count",
    "hermite_on_grid",
    "hermite_grid_function",
    "build_kernel",
    "apply_operator",
    "hermite_coefficients",
    "spectral_apply",
    "eigen_residual",
    "heat_multiplier",
    "inverse_power_multiplier",
    "conformal_inverse_multiplier",
    "conformal_forward_multiplier",
    "u_s_multiplier",
    "expected_multiplier",
    "clear_kernel_cache",
]


def worker_count() -> int:
    """Worker cap from HW_THREADS (0 or unset = auto)."""
    raw = os.environ.get("HW_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = min(4, os.cpu_count() or 1)
    return max(1, n)


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of N points covering [-L, L).  h = 2L/N.

    L >= 8 keeps Hermite tails below 1e-12 for k <= 20; N should be a
    power of two when a transform path is layered on top.
    """

    L: float = 12.0
    N: int = 512

    def __post_init__(self):
        if self.L <= 0.0:
            raise ValueError(f"grid extent must be positive, got {self.L}")
        if self.N < 2 or self.N % 2 != 0:
            raise ValueError(f"grid size must be even and >= 2, got {self.N}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    def points(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.N)


@dataclass
class GridFunction:
    grid: GridSpec
    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.shape != (self.grid.N,):
            raise ValueError(
                f"samples shape {self.samples.shape} does not match grid N={self.grid.N}"
            )

    def norm(self) -> float:
        return math.sqrt(self.grid.h * float(np.dot(self.samples, self.samples)))

    def dot(self, other: "GridFunction") -> float:
        if other.grid != self.grid:
            raise ValueError("grid mismatch")
        return self.grid.h * float(np.dot(self.samples, other.samples))


@dataclass
class OperatorKernel:
    grid: GridSpec
    matrix: np.ndarray
    symbol: SymbolSpec

    def __post_init__(self):
        n = self.grid.N
        if self.matrix.shape != (n, n):
            raise ValueError(f"kernel shape {self.matrix.shape} does not match grid N={n}")


def hermite_on_grid(kmax: int, points: np.ndarray) -> np.ndarray:
    """Rows h_0 .. h_kmax of the normalized Hermite functions on a point set."""
    out = np.zeros((kmax + 1, len(points)))
    out[0] = math.pi**-0.25 * np.exp(-0.5 * points * points)
    if kmax >= 1:
        out[1] = math.sqrt(2.0) * points * out[0]
    for k in range(1, kmax):
        out[k + 1] = points * math.sqrt(2.0 / (k + 1)) * out[k] - math.sqrt(
            k / (k + 1.0)
        ) * out[k - 1]
    return out


def hermite_grid_function(k: int, grid: GridSpec) -> GridFunction:
    return GridFunction(grid, hermite_on_grid(k, grid.points())[k])


def _laguerre_rows(kmax: int, a: float, x: np.ndarray) -> np.ndarray:
    out = np.zeros((kmax + 1, len(x)))
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 1.0 + a - x
    for m in range(1, kmax):
        out[m + 1] = ((2 * m + 1 + a - x) * out[m] - (m + a) * out[m - 1]) / (m + 1.0)
    return out


def _cheb_degree(rho_max: float) -> int:
    # entire Laplace-transform profiles of exponential type <= 1 need
    # roughly 0.7 * rho_max coefficients; pad generously
    return int(0.75 * rho_max) + 80


def radial_profile(
    spec: SymbolSpec, rho_max: float, q: QuadratureSpec = DEFAULT_QUADRATURE
) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized rho -> b(rho) evaluator valid on [0, rho_max].

    Closed-form families evaluate directly; quadrature-backed families
    (inverse-power, conformal-inverse) are tabulated once on Chebyshev
    nodes through the public scalar operations and then evaluated by
    Clenshaw recurrence (interpolation error far below the kernel
    tolerances since the profiles are entire).
    """
    n = spec.n
    if spec.family == "heat":
        t = spec.t
        sech_n = (2.0 * math.exp(-t) / (1.0 + math.exp(-2.0 * t))) ** n
        tau = math.tanh(t)
        return lambda rho: sech_n * np.exp(-tau * rho)
    if spec.family == "projection":
        k = spec.k
        sign = -1.0 if k % 2 else 1.0

        def proj(rho: np.ndarray) -> np.ndarray:
            lag = _laguerre_rows(k, n - 1.0, 2.0 * rho)[k]
            return sign * 2.0**n * lag * np.exp(-rho)

        return proj
    if spec.family == "spectral-series":
        f, K = spec.multiplier, spec.truncation

        def series(rho: np.ndarray) -> np.ndarray:
            lag = _laguerre_rows(K, n - 1.0, 2.0 * rho)
            damp = 2.0**n * np.exp(-rho)
            total = np.zeros_like(rho)
            for k in range(K + 1):
                sign = -1.0 if k % 2 else 1.0
                total += f(2.0 * k + n) * sign * lag[k]
            return total * damp

        return series
    if spec.family in ("inverse-power", "conformal-inverse", "closed-even"):
        deg = _cheb_degree(rho_max)
        jj = np.arange(deg + 1)
        nodes = np.cos(math.pi * (jj + 0.5) / (deg + 1))  # first-kind Chebyshev points
        rho_nodes = 0.5 * rho_max * (nodes + 1.0)
        vals = np.array([symbol_value(spec, float(r), q) for r in rho_nodes])
        coef = np.polynomial.chebyshev.chebfit(nodes, vals, deg)

        def interp(rho: np.ndarray) -> np.ndarray:
            x = 2.0 * rho / rho_max - 1.0
            return np.polynomial.chebyshev.chebval(x, coef)

        return interp
    raise ValueError(f"unknown symbol family {spec.family!r}")


def _y_rule(grid: GridSpec, q: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on [0, Y_cut] resolving all grid frequencies."""
    y_cut = grid.L
    delta_max = 2.0 * grid.L
    panels = max(8, int(math.ceil(y_cut * delta_max / q.base_nodes)))
    gx, gw = np.polynomial.legendre.leggauss(q.base_nodes)
    width = y_cut / panels
    starts = width * np.arange(panels)
    nodes = (starts[:, None] + 0.5 * width * (gx[None, :] + 1.0)).ravel()
    weights = np.tile(0.5 * width * gw, panels)
    return nodes, weights


def build_kernel(
    spec: SymbolSpec, grid: GridSpec, q: QuadratureSpec = DEFAULT_QUADRATURE
) -> OperatorKernel:
    """Assemble the dense Weyl kernel of a radial symbol (n = 1 only).

    The kernel is exactly symmetric by construction (entries depend on
    the midpoint and |xi - eta| only).  The y-integral is truncated at
    Y_cut = L; the discarded tail carries only frequencies above the
    Hermite band of the grid.
    """
    if spec.n != 1:
        raise ValueError(f"quantization is implemented for n = 1 only, got n = {spec.n}")
    N = grid.N
    h = grid.h
    ynodes, yweights = _y_rule(grid, q)
    rho_max = grid.L**2 + grid.L**2 + 1.0
    profile = radial_profile(spec, rho_max, q)
    ysq = ynodes * ynodes

    K = np.zeros((N, N))

    def fill_diagonal(d: int) -> None:
        m = -grid.L + 0.5 * h * d
        wb = yweights * profile(m * m + ysq)
        i_lo = max(0, d - (N - 1))
        i_hi = min(N - 1, d)
        ii = np.arange(i_lo, i_hi + 1)
        deltas = (2 * ii - d) * h
        K[ii, d - ii] = np.cos(np.outer(deltas, ynodes)) @ wb / math.pi

    workers = worker_count()
    diagonals = range(2 * N - 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill_diagonal, diagonals))
    else:
        for d in diagonals:
            fill_diagonal(d)
    return OperatorKernel(grid=grid, matrix=K, symbol=spec)


def apply_operator(kernel: OperatorKernel, phi: GridFunction) -> GridFunction:
    """Trapezoid-weighted kernel application (Op phi)(xi_i) = h sum_j K_ij phi_j."""
    if phi.grid != kernel.grid:
        raise ValueError("grid mismatch between kernel and function")
    return GridFunction(kernel.grid, kernel.grid.h * (kernel.matrix @ phi.samples))


def hermite_coefficients(phi: GridFunction, K: int) -> np.ndarray:
    """Grid Hermite coefficients c_k = h sum_i phi(xi_i) h_k(xi_i), k <= K."""
    if K > 60:
        raise ValueError(f"hermite_coefficients supports K <= 60, got {K}")
    H = hermite_on_grid(K, phi.grid.points())
    return phi.grid.h * (H @ phi.samples)


def spectral_apply(f: Callable[[float], float], phi: GridFunction, K: int) -> GridFunction:
    """Exact multiplier action sum_k f(2k+1) c_k h_k on the grid (n = 1).

    This is the oracle every quantized operator is checked against.
    """
    coeffs = hermite_coefficients(phi, K)
    H = hermite_on_grid(K, phi.grid.points())
    mult = np.array([f(2.0 * k + 1.0) for k in range(K + 1)])
    return GridFunction(phi.grid, (mult * coeffs) @ H)


def heat_multiplier(t: float) -> Callable[[float], float]:
    return lambda lam: math.exp(-t * lam)


def inverse_power_multiplier(s: float) -> Callable[[float], float]:
    return lambda lam: lam**-s


def conformal_inverse_multiplier(s: float) -> Callable[[float], float]:
    """Multiplier of the inverse conformal power: Gamma((lam+1-s)/2)/Gamma((lam+1+s)/2)."""
    return lambda lam: gamma_ratio(0.5 * (lam + 1.0 - s), 0.5 * (lam + 1.0 + s))


def conformal_forward_multiplier(s: float) -> Callable[[float], float]:
    """Multiplier of the conformal power itself."""
    return lambda lam: gamma_ratio(0.5 * (lam + 1.0 + s), 0.5 * (lam + 1.0 - s))


def u_s_multiplier(s: float) -> Callable[[float], float]:
    """Bounded multiplier relating the conformal and pure powers; tends to 1."""
    return lambda lam: gamma_ratio(0.5 * (lam + 1.0 + s), 0.5 * (lam + 1.0 - s)) * lam**-s


def expected_multiplier(spec: SymbolSpec, k: int) -> float:
    """Eigenvalue of the quantized symbol on the (2k+n)-eigenspace."""
    lam = 2.0 * k + spec.n
    if spec.family == "heat":
        return math.exp(-spec.t * lam)
    if spec.family == "inverse-power":
        return lam**-spec.s
    if spec.family == "conformal-inverse":
        return gamma_ratio(0.5 * (lam + 1.0 - spec.s), 0.5 * (lam + 1.0 + spec.s))
    if spec.family == "closed-even":
        return 1.0 / lam
    if spec.family == "projection":
        return 1.0 if k == spec.k else 0.0
    if spec.family == "spectral-series":
        return spec.multiplier(lam)
    raise ValueError(f"unknown symbol family {spec.family!r}")


_KERNEL_CACHE: dict[tuple, OperatorKernel] = {}


def _cache_key(spec: SymbolSpec, grid: GridSpec, q: QuadratureSpec) -> tuple:
    mult_id = id(spec.multiplier) if spec.family == "spectral-series" else None
    return (spec, grid, q, mult_id)


def clear_kernel_cache() -> None:
    _KERNEL_CACHE.clear()


def _cached_kernel(spec: SymbolSpec, grid: GridSpec, q: QuadratureSpec) -> OperatorKernel:
    key = _cache_key(spec, grid, q)
    kernel = _KERNEL_CACHE.get(key)
    if kernel is None:
        kernel = build_kernel(spec, grid, q)
        _KERNEL_CACHE[key] = kernel
    return kernel


def eigen_residual(
    spec: SymbolSpec, k: int, grid: GridSpec, q: QuadratureSpec = DEFAULT_QUADRATURE
) -> tuple[float, float]:
    """Rayleigh eigenvalue estimate and residual of Op(spec) on h_k.

    Returns (lambda_hat, ||Op h_k - lambda_hat h_k||_2) with
    lambda_hat = <Op h_k, h_k> in the grid inner product.  Kernels are
    cached per (symbol, grid, tolerances).
    """
    if k > 12:
        raise ValueError(f"eigen_residual supports k <= 12, got {k}")
    kernel = _cached_kernel(spec, grid, q)
    phi = hermite_grid_function(k, grid)
    out = apply_operator(kernel, phi)
    lam = out.dot(phi)
    resid = GridFunction(grid, out.samples - lam * phi.samples).norm()
    return lam, resid
