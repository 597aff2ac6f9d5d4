"""Special functions feeding the symbol calculus.

Everything here is scalar, pure and deterministic: log-Gamma, normalized
Hermite functions and Hermite/Laguerre polynomial tensors (three-term
recurrences only, never explicit coefficient tables), the Macdonald
function K_nu through the Sommerfeld integral with a double-exponential
rule, exponential Taylor polynomials and the regularized incomplete
gamma ratio built from them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover
    from .quadrature import QuadratureSpec

__all__ = [
    "AccuracyError",
    "MultiIndex",
    "HermiteEval",
    "log_gamma",
    "gamma_ratio",
    "hermite_h",
    "hermite_poly",
    "hermite_tensor",
    "phi_tensor",
    "laguerre",
    "laguerre_fn",
    "laguerre_sequence",
    "macdonald_k",
    "macdonald_k_poisson",
    "exp_taylor_poly",
    "incomplete_gamma_ratio",
]

_EXACT_FACTORIAL_MAX = 20


class AccuracyError(ArithmeticError):
    """A quadrature failed to reach the requested tolerance.

    Carries the last error estimate in ``residual``.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual estimate {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class MultiIndex:
    """Multi-index alpha in N^d with order and factorial helpers.

    The factorial is exact (Python int) for |alpha| <= 20 and is otherwise
    assembled in log space to avoid overflow for high derivative orders.
    """

    entries: tuple[int, ...]

    def __init__(self, entries: Sequence[int]):
        entries = tuple(int(e) for e in entries)
        if any(e < 0 for e in entries):
            raise ValueError(f"multi-index entries must be non-negative, got {entries}")
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def order(self) -> int:
        """|alpha| = sum of the entries."""
        return sum(self.entries)

    @property
    def log_factorial(self) -> float:
        """log(alpha!) = sum of log(entry!)."""
        return sum(log_gamma(e + 1.0) for e in self.entries)

    @property
    def factorial(self) -> float:
        """alpha! as a float; exact integer path for |alpha| <= 20."""
        if self.order <= _EXACT_FACTORIAL_MAX:
            out = 1
            for e in self.entries:
                out *= math.factorial(e)
            return float(out)
        return math.exp(self.log_factorial)


@dataclass(frozen=True)
class HermiteEval:
    """A single normalized-Hermite-function evaluation h_k(scale * t)."""

    order: int
    value: float
    scale: float = 1.0

    @classmethod
    def of(cls, order: int, t: float, scale: float = 1.0) -> "HermiteEval":
        return cls(order=order, value=hermite_h(order, scale * t), scale=scale)


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0.0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def gamma_ratio(num: float, den: float) -> float:
    """Gamma(num)/Gamma(den), evaluated in log space."""
    return math.exp(log_gamma(num) - log_gamma(den))


def hermite_h(k: int, t: float) -> float:
    """Normalized Hermite function h_k(t) = (2^k k! sqrt(pi))^{-1/2} H_k(t) e^{-t^2/2}.

    Evaluated through the stable recurrence
    h_{k+1}(t) = t sqrt(2/(k+1)) h_k(t) - sqrt(k/(k+1)) h_{k-1}(t),
    so H_k and k! are never formed separately.  Underflows smoothly to 0
    for large |t|.
    """
    if k < 0:
        raise ValueError(f"hermite_h requires k >= 0, got {k}")
    h0 = math.pi ** -0.25 * math.exp(-0.5 * t * t)
    if k == 0:
        return h0
    h1 = math.sqrt(2.0) * t * h0
    for m in range(1, k):
        h0, h1 = h1, t * math.sqrt(2.0 / (m + 1)) * h1 - math.sqrt(m / (m + 1.0)) * h0
    return h1


def hermite_poly(k: int, t: float) -> float:
    """Physicists' Hermite polynomial H_k(t) via H_{m+1} = 2t H_m - 2m H_{m-1}."""
    if k < 0:
        raise ValueError(f"hermite_poly requires k >= 0, got {k}")
    h0 = 1.0
    if k == 0:
        return h0
    h1 = 2.0 * t
    for m in range(1, k):
        h0, h1 = h1, 2.0 * t * h1 - 2.0 * m * h0
    return h1


def hermite_tensor(alpha: MultiIndex, p: Sequence[float]) -> float:
    """Tensor Hermite polynomial H_alpha(p) = prod_j H_{alpha_j}(p_j).

    This is the polynomial part only (no Gaussian); it satisfies
    H_alpha(p) e^{-|p|^2} = (-1)^{|alpha|} d^alpha e^{-|p|^2}.
    """
    if len(alpha) != len(p):
        raise ValueError(f"dimension mismatch: |alpha|={len(alpha)} point={len(p)}")
    out = 1.0
    for a, x in zip(alpha, p):
        out *= hermite_poly(a, x)
    return out


def phi_tensor(alpha: MultiIndex, p: Sequence[float]) -> float:
    """Normalized tensor Hermite function Phi_alpha(p) = prod_j h_{alpha_j}(p_j)."""
    if len(alpha) != len(p):
        raise ValueError(f"dimension mismatch: |alpha|={len(alpha)} point={len(p)}")
    out = 1.0
    for a, x in zip(alpha, p):
        out *= hermite_h(a, x)
    return out


def laguerre(k: int, a: float, r: float) -> float:
    """Generalized Laguerre polynomial L_k^a(r) by the three-term recurrence."""
    if k < 0:
        raise ValueError(f"laguerre requires k >= 0, got {k}")
    if a <= -1.0:
        raise ValueError(f"laguerre requires order a > -1, got {a}")
    l0 = 1.0
    if k == 0:
        return l0
    l1 = 1.0 + a - r
    for m in range(1, k):
        l0, l1 = l1, ((2 * m + 1 + a - r) * l1 - (m + a) * l0) / (m + 1.0)
    return l1


def laguerre_fn(k: int, a: float, r: float) -> float:
    """Laguerre function of type a: L_k^a(r^2) e^{-r^2/2}."""
    return laguerre(k, a, r * r) * math.exp(-0.5 * r * r)


def laguerre_sequence(kmax: int, a: float, r: float) -> list[float]:
    """[L_0^a(r), ..., L_kmax^a(r)] from a single forward recurrence."""
    if kmax < 0:
        raise ValueError(f"laguerre_sequence requires kmax >= 0, got {kmax}")
    if a <= -1.0:
        raise ValueError(f"laguerre_sequence requires order a > -1, got {a}")
    out = [1.0]
    if kmax == 0:
        return out
    out.append(1.0 + a - r)
    for m in range(1, kmax):
        out.append(((2 * m + 1 + a - r) * out[m] - (m + a) * out[m - 1]) / (m + 1.0))
    return out


def _de_trapezoid(phi, wstar: float, rel_tol: float) -> tuple[float, float, int, bool]:
    """Trapezoid sum of exp(phi(w) - phi_max) over the real line.

    phi must decay at least exponentially in both directions (after the
    exp-substitution of the Sommerfeld integral it decays doubly
    exponentially), so the trapezoid rule converges geometrically under
    step halving.  Returns (sum * h * exp-shift handled by caller, error
    estimate, evaluations, converged); the shift phi_max is applied by
    the caller.
    """
    pmax = phi(wstar)
    wlo = wstar
    while phi(wlo) > pmax - 80.0:
        wlo -= 1.0
    whi = wstar
    while phi(whi) > pmax - 80.0:
        whi += 1.0

    evals = 0

    def trap(h: float) -> float:
        nonlocal evals
        n = int(math.ceil((whi - wlo) / h))
        s = 0.0
        for i in range(n + 1):
            s += math.exp(phi(wlo + i * h) - pmax)
        evals += n + 1
        return s * h

    h = (whi - wlo) / 16.0
    prev = trap(h)
    err = math.inf
    for _ in range(12):
        h *= 0.5
        cur = trap(h)
        err = abs(cur - prev)
        prev = cur
        if err <= rel_tol * abs(cur):
            return prev, err, evals, True
    return prev, err, evals, False


def macdonald_k(nu: float, r: float, q: "QuadratureSpec | None" = None) -> float:
    """Macdonald function K_nu(r) from the Sommerfeld integral.

    K_nu(r) = (1/2) (r/2)^nu int_0^inf exp(-(t + r^2/(4t))) t^{-nu-1} dt,
    evaluated after t = e^w, where both tails of the integrand decay
    doubly exponentially and the trapezoid rule converges geometrically.
    The log-integrand is shifted by its maximum before exponentiation so
    the rule is overflow-safe for |nu| <= 30 and r down to 1e-3.
    """
    if not r > 0.0:
        raise ValueError(f"macdonald_k requires r > 0, got {r}")
    rel_tol = 1e-13 if q is None else max(q.rel_tol, 1e-14)
    quarter = 0.25 * r * r
    if quarter == 0.0:
        raise ValueError(f"macdonald_k argument too small (r^2 underflows): {r}")

    def phi(w: float) -> float:
        return -(math.exp(w) + quarter * math.exp(-w)) - nu * w

    # stationary point of phi: e^w = (-nu + sqrt(nu^2 + r^2)) / 2,
    # in log form so it is cancellation- and underflow-free for r << nu
    root = math.sqrt(nu * nu + r * r)
    if nu <= 0.0:
        wstar = math.log(0.5 * (root - nu))
    else:
        wstar = 2.0 * math.log(r) - math.log(2.0 * (root + nu))
    total, err, _, converged = _de_trapezoid(phi, wstar, rel_tol)
    if not converged:
        raise AccuracyError(f"macdonald_k({nu}, {r}) did not converge", err)
    return 0.5 * math.exp(nu * math.log(0.5 * r) + phi(wstar)) * total


def macdonald_k_poisson(nu: float, r: float, q: "QuadratureSpec | None" = None) -> float:
    """K_nu(r) from the Poisson integral representation (cross-check route).

    K_nu(r) = sqrt(pi)/(sqrt(2) Gamma(nu+1/2)) r^{-1/2} e^{-r}
              int_0^inf e^{-t} t^{nu-1/2} (1 + t/(2r))^{nu-1/2} dt,
    valid for nu > -1/2.  Independent of the Sommerfeld path.
    """
    if not r > 0.0:
        raise ValueError(f"macdonald_k_poisson requires r > 0, got {r}")
    if nu <= -0.5:
        raise ValueError(f"Poisson representation requires nu > -1/2, got {nu}")
    rel_tol = 1e-13 if q is None else max(q.rel_tol, 1e-14)

    def phi(w: float) -> float:
        t = math.exp(w)
        return -t + (nu + 0.5) * w + (nu - 0.5) * math.log1p(t / (2.0 * r))

    wstar = math.log(max(nu + 0.5, 0.2))
    total, err, _, converged = _de_trapezoid(phi, wstar, rel_tol)
    if not converged:
        raise AccuracyError(f"macdonald_k_poisson({nu}, {r}) did not converge", err)
    pref = 0.5 * math.log(math.pi / 2.0) - log_gamma(nu + 0.5) - 0.5 * math.log(r) - r
    return math.exp(pref + phi(wstar)) * total


def exp_taylor_poly(j: int, a: float) -> float:
    """Degree-j Taylor polynomial of the exponential, e_j(a) = sum_{m<=j} a^m/m!.

    Horner evaluation.  Note the positive orientation: the identity
    (1/j!) int_0^a t^j e^{-t} dt = 1 - e^{-a} e_j(a) forces coefficients
    of e^{+t} (direct integration at j = 1 gives 1 - 2/e).
    """
    if j < 0:
        raise ValueError(f"exp_taylor_poly requires j >= 0, got {j}")
    p = 1.0
    for m in range(j, 0, -1):
        p = 1.0 + p * a / m
    return p


def incomplete_gamma_ratio(j: int, a: float) -> float:
    """(1/j!) int_0^a t^j e^{-t} dt, monotone in a, tending to 1.

    Equals 1 - e^{-a} e_j(a).  When that difference would cancel
    catastrophically (small a, large j) the identical positive tail
    series e^{-a} sum_{i>j} a^i/i! is summed instead, preserving full
    relative accuracy.
    """
    if j < 0:
        raise ValueError(f"incomplete_gamma_ratio requires j >= 0, got {j}")
    if a < 0.0:
        raise ValueError(f"incomplete_gamma_ratio requires a >= 0, got {a}")
    if a == 0.0:
        return 0.0
    head = math.exp(-a) * exp_taylor_poly(j, a)
    if head <= 0.5:
        return 1.0 - head
    # tail series: term i = a^i / i! starting from i = j+1
    term = math.exp(-a + (j + 1) * math.log(a) - log_gamma(j + 2.0))
    total = term
    i = j + 2
    while True:
        term *= a / i
        total += term
        i += 1
        if term <= 1e-18 * total:
            return total
