"""Weyl symbols of the Hermite-operator functional calculus.

Every symbol here is radial in phase space: a function of
rho = |x|^2 + |xi|^2 and the dimension n.  The families are

* ``heat``: (cosh t)^{-n} e^{-(tanh t) rho}, the Mehler form of the
  heat semigroup symbol (normalization pinned so the quantized operator
  has eigenvalue e^{-(2k+n)t} on the 2k+n eigenspace);
* ``inverse-power``: the Gamma-weighted time integral of the heat
  symbol, giving the symbol of the fractional inverse power of order s;
* ``closed-even``: the explicit finite sum valid in even dimension
  2m, in two coefficient conventions kept side by side for arbitration;
* ``conformal-inverse``: the one-parameter Laplace-type integral
  c_{n,s} int_0^1 e^{-a rho} a^{s-1} (1-a^2)^{(n-s-1)/2} da whose
  quantization inverts the conformally invariant fractional power; the
  constant is pinned numerically per (n, s) by the k = 0 eigenvalue;
* ``projection``: sigma_k(rho) = (-1)^k 2^n L_k^{n-1}(2 rho) e^{-rho},
  the symbol of the rank-(k) spectral projection, validated through the
  Laguerre generating function;
* ``spectral-series``: truncated multiplier series over the projection
  symbols, the series oracle for everything else.

Arbitrary-order derivatives of the inverse-power symbol come from the
Hermite-polynomial integral representation in ``derivative_symbol``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .quadrature import (
    DEFAULT_QUADRATURE,
    IntegralResult,
    QuadratureSpec,
    integrate_power_endpoint,
    integrate_tanh_sinh,
)
from .special import (
    AccuracyError,
    MultiIndex,
    gamma_ratio,
    hermite_tensor,
    laguerre_sequence,
    log_gamma,
)

__all__ = [
    "PhasePoint",
    "SymbolSpec",
    "EstimatePoint",
    "FAMILIES",
    "COEFF_PAPER_PRINTED",
    "COEFF_BINOMIAL",
    "heat_symbol",
    "inverse_power_symbol",
    "closed_even_symbol",
    "conformal_inverse_symbol",
    "conformal_pinning_constant",
    "projection_symbol",
    "spectral_series_symbol",
    "derivative_symbol",
    "symbol_value",
]

COEFF_PAPER_PRINTED = "paper-printed"
COEFF_BINOMIAL = "binomial-from-proof"

FAMILIES = (
    "heat",
    "inverse-power",
    "conformal-inverse",
    "closed-even",
    "projection",
    "spectral-series",
)

_HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class PhasePoint:
    """A phase-space point (x, xi) with its radial coordinate rho."""

    x: tuple[float, ...]
    xi: tuple[float, ...]

    def __init__(self, x: Sequence[float], xi: Sequence[float]):
        x = tuple(float(v) for v in x)
        xi = tuple(float(v) for v in xi)
        if len(x) != len(xi):
            raise ValueError(f"x and xi must share a dimension, got {len(x)} and {len(xi)}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "xi", xi)

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def rho(self) -> float:
        return math.fsum(v * v for v in self.x) + math.fsum(v * v for v in self.xi)

    @property
    def coords(self) -> tuple[float, ...]:
        return self.x + self.xi

    @classmethod
    def on_axis(cls, rho: float, n: int) -> "PhasePoint":
        """The point (sqrt(rho) e_1, 0)."""
        x = (math.sqrt(rho),) + (0.0,) * (n - 1)
        return cls(x, (0.0,) * n)


@dataclass(frozen=True)
class SymbolSpec:
    """Tagged choice of a symbol family together with its parameters."""

    family: str
    n: int = 1
    t: float | None = None
    s: float | None = None
    k: int | None = None
    coeff_family: str = COEFF_BINOMIAL
    multiplier: Callable[[float], float] | None = field(default=None, compare=False)
    truncation: int = 200

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown symbol family {self.family!r}")
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")
        if self.family == "heat" and not (self.t is not None and self.t > 0.0):
            raise ValueError("heat family requires t > 0")
        if self.family in ("inverse-power", "conformal-inverse") and not (
            self.s is not None and 0.0 < self.s <= 1.0
        ):
            raise ValueError(f"{self.family} family requires s in (0, 1]")
        if self.family == "closed-even":
            if self.n % 2 != 0:
                raise ValueError("closed-even family requires an even dimension")
            if self.coeff_family not in (COEFF_PAPER_PRINTED, COEFF_BINOMIAL):
                raise ValueError(f"unknown coefficient family {self.coeff_family!r}")
        if self.family == "projection" and not (self.k is not None and self.k >= 0):
            raise ValueError("projection family requires k >= 0")
        if self.family == "spectral-series":
            if self.multiplier is None:
                raise ValueError("spectral-series family requires a multiplier")
            if self.truncation < 0:
                raise ValueError("spectral-series truncation must be >= 0")

    @classmethod
    def heat(cls, t: float, n: int = 1) -> "SymbolSpec":
        return cls(family="heat", n=n, t=t)

    @classmethod
    def inverse_power(cls, s: float, n: int = 1) -> "SymbolSpec":
        return cls(family="inverse-power", n=n, s=s)

    @classmethod
    def conformal_inverse(cls, s: float, n: int = 1) -> "SymbolSpec":
        return cls(family="conformal-inverse", n=n, s=s)

    @classmethod
    def closed_even(cls, half_dim: int, coeff_family: str = COEFF_BINOMIAL) -> "SymbolSpec":
        return cls(family="closed-even", n=2 * half_dim, coeff_family=coeff_family)

    @classmethod
    def projection(cls, k: int, n: int = 1) -> "SymbolSpec":
        return cls(family="projection", n=n, k=k)

    @classmethod
    def spectral_series(
        cls, multiplier: Callable[[float], float], truncation: int, n: int = 1
    ) -> "SymbolSpec":
        return cls(family="spectral-series", n=n, multiplier=multiplier, truncation=truncation)


@dataclass(frozen=True)
class EstimatePoint:
    """One sampled derivative value feeding the estimate scans."""

    alpha: MultiIndex
    value: float
    rho: float
    s: float


def _sech_pow(t: float, n: int) -> float:
    # (cosh t)^{-n} in an overflow-free form, valid for any t >= 0
    e = math.exp(-t)
    return (2.0 * e / (1.0 + e * e)) ** n


def heat_symbol(t: float, rho: float, n: int) -> float:
    """Heat semigroup symbol (cosh t)^{-n} e^{-(tanh t) rho}."""
    if not t > 0.0:
        raise ValueError(f"heat_symbol requires t > 0, got {t}")
    if rho < 0.0:
        raise ValueError(f"heat_symbol requires rho >= 0, got {rho}")
    return _sech_pow(t, n) * math.exp(-math.tanh(t) * rho)


def _mehler_g(rho: float, n: int) -> Callable[[float], float]:
    def g(t: float) -> float:
        return _sech_pow(t, n) * math.exp(-math.tanh(t) * rho)

    return g


def inverse_power_symbol(
    s: float, rho: float, n: int, q: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Symbol of the fractional inverse power of order s.

    (1/Gamma(s)) int_0^inf t^{s-1} (cosh t)^{-n} e^{-(tanh t) rho} dt;
    at s = 1 this coincides with int_0^1 (1-u^2)^{n/2-1} e^{-u rho} du.
    """
    if not 0.0 < s <= 1.0:
        raise ValueError(f"inverse_power_symbol requires s in (0, 1], got {s}")
    if rho < 0.0:
        raise ValueError(f"inverse_power_symbol requires rho >= 0, got {rho}")
    res = integrate_power_endpoint(_mehler_g(rho, n), s, q)
    if not res.converged:
        raise AccuracyError(
            f"inverse_power_symbol(s={s}, rho={rho}, n={n}) quadrature did not converge",
            res.err_estimate,
        )
    return res.value / math.exp(log_gamma(s))


def _closed_even_coeff(j: int, m: int, coeff_family: str) -> float:
    if coeff_family == COEFF_PAPER_PRINTED:
        # (m+j-1)! / ((m-1)! j!)
        return math.exp(log_gamma(m + j) - log_gamma(m) - log_gamma(j + 1.0))
    if coeff_family == COEFF_BINOMIAL:
        return float(math.comb(m - 1, j))
    raise ValueError(f"unknown coefficient family {coeff_family!r}")


def closed_even_symbol(rho: float, half_dim: int, coeff_family: str = COEFF_BINOMIAL) -> float:
    """Closed-form symbol of the inverse operator in even dimension 2*half_dim.

    sum_{j=0}^{m-1} c_j (-1)^j (2j)! [1 - e^{-rho} e_{2j}(rho)] / rho^{2j+1}
    with c_j either (m+j-1)!/((m-1)! j!) ("paper-printed") or C(m-1, j)
    ("binomial-from-proof").  The removable singularity at rho = 0 is
    handled by the power series of the incomplete-gamma ratio below
    rho = 1e-3.
    """
    from .special import incomplete_gamma_ratio

    if half_dim < 1:
        raise ValueError(f"closed_even_symbol requires half_dim >= 1, got {half_dim}")
    if rho < 0.0:
        raise ValueError(f"closed_even_symbol requires rho >= 0, got {rho}")
    total = 0.0
    for j in range(half_dim):
        c = _closed_even_coeff(j, half_dim, coeff_family)
        if rho < 1e-3:
            # [1 - e^{-rho} e_{2j}(rho)] rho^{-2j-1} = e^{-rho} sum_l rho^l / (l+2j+1)!
            core = 0.0
            fac = math.exp(-log_gamma(2 * j + 2.0))  # 1/(2j+1)!
            p = 1.0
            for l in range(26):
                core += p * fac
                p *= rho
                fac /= 2 * j + 2 + l
            core *= math.exp(-rho)
        else:
            core = incomplete_gamma_ratio(2 * j, rho) / rho ** (2 * j + 1)
        sign = -1.0 if j % 2 else 1.0
        total += c * sign * math.exp(log_gamma(2 * j + 1.0)) * core
    return total


_PIN_CACHE: dict[tuple[int, float], float] = {}


def _conformal_raw(
    s: float, n: int, q: QuadratureSpec, extra: Callable[[float], float] | None = None
) -> IntegralResult:
    """int_0^1 a^{s-1} (1-a^2)^{(n-s-1)/2} extra(a) da with exact endpoint handling.

    Split at a = 1/2: the a^{s-1} factor is removed by a = v^{1/s} on the
    left, the right endpoint softened by a = sin(theta).
    """
    ex = 0.5 * (n - s - 1.0)
    inv_s = 1.0 / s

    def left(v: float) -> float:
        a = v**inv_s
        val = (1.0 - a * a) ** ex
        if extra is not None:
            val *= extra(a)
        return val

    def right(theta: float) -> float:
        a = math.sin(theta)
        c = math.cos(theta)
        # a^{s-1} (1-a^2)^{ex} cos(theta) = a^{s-1} cos^{n-s}(theta)
        val = a ** (s - 1.0) * c ** (n - s)
        if extra is not None:
            val *= extra(a)
        return val

    res_l = integrate_tanh_sinh(left, 0.0, 0.5**s, q)
    res_l.value *= inv_s
    res_l.err_estimate *= inv_s
    res_r = integrate_tanh_sinh(right, math.asin(0.5), _HALF_PI, q)
    return res_l + res_r


def conformal_pinning_constant(s: float, n: int, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Normalization c_{n,s} of the conformal-inverse symbol, cached per (n, s).

    Pinned by requiring the quantized operator to act on the ground state
    with the k = 0 multiplier Gamma((n+1-s)/2) / Gamma((n+1+s)/2).  The
    quantization of e^{-a rho} has exact eigenvalue (1-a)^k (1+a)^{-k-n}
    on the 2k+n eigenspace, so the condition is a single a-integral.
    The cache fill is idempotent (same value from any thread).
    """
    key = (n, float(s))
    cached = _PIN_CACHE.get(key)
    if cached is not None:
        return cached
    raw = _conformal_raw(s, n, q, extra=lambda a: (1.0 + a) ** (-n))
    if not raw.converged:
        raise AccuracyError(
            f"conformal pinning integral (s={s}, n={n}) did not converge", raw.err_estimate
        )
    target = gamma_ratio(0.5 * (n + 1 - s), 0.5 * (n + 1 + s))
    value = target / raw.value
    _PIN_CACHE.setdefault(key, value)
    return _PIN_CACHE[key]


def conformal_inverse_symbol(
    s: float, rho: float, n: int, q: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Symbol whose quantization inverts the conformally invariant power.

    c_{n,s} int_0^1 e^{-a rho} a^{s-1} (1-a^2)^{(n-s-1)/2} da with c_{n,s}
    from conformal_pinning_constant.  At s = 1 the integral reduces to the
    inverse-power form, so the two symbols are exactly proportional with
    ratio c_{n,1} (= 2, matching the halved spectrum of the conformal
    power at s = 1).
    """
    if not 0.0 < s <= 1.0:
        raise ValueError(f"conformal_inverse_symbol requires s in (0, 1], got {s}")
    if rho < 0.0:
        raise ValueError(f"conformal_inverse_symbol requires rho >= 0, got {rho}")
    c = conformal_pinning_constant(s, n, q)
    res = _conformal_raw(s, n, q, extra=lambda a: math.exp(-a * rho))
    if not res.converged:
        raise AccuracyError(
            f"conformal_inverse_symbol(s={s}, rho={rho}, n={n}) did not converge",
            res.err_estimate,
        )
    return c * res.value


def projection_symbol(k: int, rho: float, n: int) -> float:
    """Spectral projection symbol (-1)^k 2^n L_k^{n-1}(2 rho) e^{-rho}."""
    if k < 0:
        raise ValueError(f"projection_symbol requires k >= 0, got {k}")
    if rho < 0.0:
        raise ValueError(f"projection_symbol requires rho >= 0, got {rho}")
    lag = laguerre_sequence(k, n - 1.0, 2.0 * rho)[k]
    sign = -1.0 if k % 2 else 1.0
    return sign * 2.0**n * lag * math.exp(-rho)


def spectral_series_symbol(
    f: Callable[[float], float], K: int, rho: float, n: int
) -> float:
    """Truncated multiplier series sum_{k<=K} f(2k+n) sigma_k(rho).

    The caller owns the truncation-error budget; multipliers decaying
    geometrically in k (heat) converge to machine precision, algebraic
    multipliers converge slowly and oscillate.
    """
    if K < 0:
        raise ValueError(f"spectral_series_symbol requires K >= 0, got {K}")
    lag = laguerre_sequence(K, n - 1.0, 2.0 * rho)
    damp = math.exp(-rho)
    two_n = 2.0**n
    total = 0.0
    for k in range(K + 1):
        sign = -1.0 if k % 2 else 1.0
        total += f(2.0 * k + n) * sign * two_n * lag[k] * damp
    return total


def derivative_symbol(
    alpha: MultiIndex,
    s: float,
    p: PhasePoint,
    q: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Derivative d^alpha of the inverse-power symbol at a phase point.

    Uses the Hermite-polynomial integral representation
    (-1)^{|alpha|} / Gamma(s) int_0^inf t^{s-1} (cosh t)^{-n}
    (tanh t)^{|alpha|/2} H_alpha(sqrt(tanh t) (x, xi))
    e^{-(tanh t)(|x|^2+|xi|^2)} dt,
    integrated through the same split-and-substitute route as the symbol
    itself.  alpha must have 2n entries; at alpha = 0 this is exactly
    inverse_power_symbol.
    """
    if not 0.0 < s <= 1.0:
        raise ValueError(f"derivative_symbol requires s in (0, 1], got {s}")
    if len(alpha) != 2 * p.n:
        raise ValueError(
            f"alpha must have 2n = {2 * p.n} entries, got {len(alpha)}"
        )
    n = p.n
    rho = p.rho
    coords = p.coords
    half_order = 0.5 * alpha.order

    def g(t: float) -> float:
        u = math.tanh(t)
        ru = math.sqrt(u)
        scaled = tuple(ru * c for c in coords)
        return (
            _sech_pow(t, n)
            * u**half_order
            * hermite_tensor(alpha, scaled)
            * math.exp(-u * rho)
        )

    res = integrate_power_endpoint(g, s, q)
    if not res.converged:
        raise AccuracyError(
            f"derivative_symbol(alpha={alpha.entries}, s={s}) did not converge",
            res.err_estimate,
        )
    sign = -1.0 if alpha.order % 2 else 1.0
    return sign * res.value / math.exp(log_gamma(s))


def symbol_value(spec: SymbolSpec, rho: float, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Evaluate any symbol family at radial coordinate rho."""
    if spec.family == "heat":
        return heat_symbol(spec.t, rho, spec.n)
    if spec.family == "inverse-power":
        return inverse_power_symbol(spec.s, rho, spec.n, q)
    if spec.family == "conformal-inverse":
        return conformal_inverse_symbol(spec.s, rho, spec.n, q)
    if spec.family == "closed-even":
        return closed_even_symbol(rho, spec.n // 2, spec.coeff_family)
    if spec.family == "projection":
        return projection_symbol(spec.k, rho, spec.n)
    if spec.family == "spectral-series":
        return spectral_series_symbol(spec.multiplier, spec.truncation, rho, spec.n)
    raise ValueError(f"unknown symbol family {spec.family!r}")
