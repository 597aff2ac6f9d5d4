"""Executable checks of the symbol estimates and identities.

Four checkers plus the batch suites driven by the CLI:

* gevrey_scan: empirical constants for the derivative bounds
  |d^alpha b_s| <= C^{|alpha|+1} (alpha!)^{(r+1)/2} rho^{-s-(r/2)|alpha|};
* fourier_macdonald_check: the 2n-dimensional Fourier transform of the
  conformal-inverse symbol against the Macdonald closed shape;
* laguerre_expansion_check: pointwise closed-form-vs-truncated-series
  comparison for the radial Macdonald profile, plus the coefficient
  projection check that captures the substance of the expansion;
* closed_form_arbitration: the even-dimension closed sum in both
  coefficient conventions against direct quadrature.

Fitted constants are reported, never asserted against unknown sharp
values.  All scans run in deterministic index order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .quadrature import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    gr_identity_check,
    integrate_mehler,
    integrate_tanh_sinh,
)
from .special import MultiIndex, gamma_ratio, laguerre_sequence, log_gamma, macdonald_k
from .symbols import (
    COEFF_BINOMIAL,
    COEFF_PAPER_PRINTED,
    PhasePoint,
    SymbolSpec,
    closed_even_symbol,
    conformal_inverse_symbol,
    conformal_pinning_constant,
    derivative_symbol,
)

__all__ = [
    "EstimateRecord",
    "EstimateReport",
    "FourierCheckReport",
    "ArbitrationReport",
    "SuiteResult",
    "gevrey_scan",
    "two_slot_ladder",
    "fourier_macdonald_check",
    "fourier_roundtrip",
    "laguerre_expansion_check",
    "laguerre_coefficient_check",
    "closed_form_arbitration",
    "suite_spectral",
    "suite_gevrey",
    "suite_fourier",
    "suite_laguerre",
    "suite_arbitration",
    "suite_gr_identity",
    "SUITES",
    "run_suite",
]

_HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class EstimateRecord:
    alpha: tuple[int, ...]
    rho: float
    lhs: float
    bound_core: float
    c_emp: float


@dataclass
class EstimateReport:
    s: float
    r: float
    records: list[EstimateRecord]
    max_c_emp: float
    max_increment: float
    trend: str  # "bounded" or "growing" increments of the per-order maxima


@dataclass
class FourierCheckReport:
    s: float
    n: int
    c_fit: float
    radii: list[float]
    deviations: list[float]

    @property
    def max_deviation(self) -> float:
        return max(self.deviations)


@dataclass
class ArbitrationReport:
    rows: list[dict]
    max_dev: dict[str, float]
    matching_family: str


@dataclass
class SuiteResult:
    name: str
    passed: bool
    records: list[dict]
    summary: dict = field(default_factory=dict)


_DERIV_CACHE: dict[tuple, float] = {}


def _axis_derivative(
    a1: int, a2: int, s: float, rho: float, n: int, q: QuadratureSpec
) -> float:
    """|d^alpha b_s| at (sqrt(rho) e_1, 0) for the two-slot ladder, memoized."""
    key = (a1, a2, float(s), float(rho), n, q)
    val = _DERIV_CACHE.get(key)
    if val is None:
        alpha = MultiIndex((a1, a2) + (0,) * (2 * n - 2))
        val = abs(derivative_symbol(alpha, s, PhasePoint.on_axis(rho, n), q))
        _DERIV_CACHE[key] = val
    return val


def two_slot_ladder(alpha_max: int) -> list[tuple[int, int]]:
    """(a1, a2) with a1 + a2 <= alpha_max, a2 even.

    Odd-a2 derivatives vanish identically at on-axis phase points for a
    radial symbol, so they carry no information and are excluded.
    """
    return [
        (a1, a2)
        for a1 in range(alpha_max + 1)
        for a2 in range(0, alpha_max - a1 + 1, 2)
    ]


def gevrey_scan(
    s: float,
    r: float,
    alpha_max: int,
    rho_grid: list[float],
    n: int = 1,
    q: QuadratureSpec = DEFAULT_QUADRATURE,
) -> EstimateReport:
    """Empirical derivative-bound constants over the two-slot alpha ladder.

    For each (alpha, rho) the record holds lhs = |d^alpha b_s| at
    (sqrt(rho) e_1, 0), the bound core (alpha!)^{(r+1)/2}
    rho^{-s-(r/2)|alpha|}, and C_emp = (lhs/core)^{1/(|alpha|+1)}.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"gevrey_scan requires r in [0, 1], got {r}")
    if not 0.0 < s <= 1.0:
        raise ValueError(f"gevrey_scan requires s in (0, 1], got {s}")
    if any(rho <= 0.0 for rho in rho_grid):
        raise ValueError("rho grid must stay away from 0 (the bound diverges there)")
    records: list[EstimateRecord] = []
    per_order_max: dict[int, float] = {}
    for a1, a2 in two_slot_ladder(alpha_max):
        order = a1 + a2
        log_fact = log_gamma(a1 + 1.0) + log_gamma(a2 + 1.0)
        for rho in rho_grid:
            lhs = _axis_derivative(a1, a2, s, rho, n, q)
            core = math.exp(
                0.5 * (r + 1.0) * log_fact - (s + 0.5 * r * order) * math.log(rho)
            )
            c_emp = (lhs / core) ** (1.0 / (order + 1))
            records.append(
                EstimateRecord(
                    alpha=(a1, a2), rho=rho, lhs=lhs, bound_core=core, c_emp=c_emp
                )
            )
            per_order_max[order] = max(per_order_max.get(order, 0.0), c_emp)
    orders = sorted(per_order_max)
    increments = [
        abs(per_order_max[orders[i + 1]] - per_order_max[orders[i]])
        for i in range(len(orders) - 1)
    ]
    max_inc = max(increments) if increments else 0.0
    trend = "bounded" if max_inc <= 1.0 else "growing"
    return EstimateReport(
        s=s,
        r=r,
        records=records,
        max_c_emp=max(rec.c_emp for rec in records),
        max_increment=max_inc,
        trend=trend,
    )


def _conformal_transform(s: float, R: float, q: QuadratureSpec) -> float:
    """2-D Fourier transform of the conformal-inverse symbol at radius R (n = 1).

    The a-integral and the Gaussian Fourier integral are exchanged, so
    each inner transform is the closed form (pi/a) e^{-R^2/(4a)} and no
    oscillatory quadrature is needed:
    FT(R) = pi c_{1,s} int_0^1 a^{s-2} (1-a^2)^{-s/2} e^{-R^2/(4a)} da.
    """
    c = conformal_pinning_constant(s, 1, q)
    quarter = 0.25 * R * R

    def integrand(theta: float) -> float:
        a = math.sin(theta)
        # log form keeps a^{s-2} * exp(-R^2/4a) from overflowing near 0
        expo = (s - 2.0) * math.log(a) + (1.0 - s) * math.log(math.cos(theta)) - quarter / a
        return math.exp(expo) if expo > -745.0 else 0.0

    res = integrate_tanh_sinh(integrand, 0.0, _HALF_PI, q)
    return math.pi * c * res.value


def _macdonald_shape(s: float, R: float, n: int = 1) -> float:
    nu = 0.5 * (n - s)
    return R ** (-(n - s)) * macdonald_k(nu, 0.25 * R * R)


def fourier_macdonald_check(
    s: float, radii: list[float], q: QuadratureSpec = DEFAULT_QUADRATURE, n: int = 1
) -> FourierCheckReport:
    """Fit of the symbol transform against the Macdonald shape (n = 1).

    A single constant C is fitted by least squares over the radii; the
    report carries the per-radius relative deviation against C * shape.
    """
    if n != 1:
        raise ValueError("the transform check is implemented for n = 1")
    if any(R <= 0.0 for R in radii):
        raise ValueError("radii must be positive")
    ft = [_conformal_transform(s, R, q) for R in radii]
    shape = [_macdonald_shape(s, R, n) for R in radii]
    c_fit = sum(f * m for f, m in zip(ft, shape)) / sum(m * m for m in shape)
    deviations = [abs(f - c_fit * m) / abs(c_fit * m) for f, m in zip(ft, shape)]
    return FourierCheckReport(s=s, n=n, c_fit=c_fit, radii=list(radii), deviations=deviations)


def _bessel_j0(z: float) -> float:
    # J_0 via its cosine integral representation; 64-node rule resolves |z| <= 40
    x, w = np.polynomial.legendre.leggauss(64)
    phi = _HALF_PI * (x + 1.0)
    return float(np.dot(w, np.cos(z * np.sin(phi)))) * 0.5


def fourier_roundtrip(
    s: float, rho: float, radii: list[float], q: QuadratureSpec = DEFAULT_QUADRATURE
) -> tuple[float, float]:
    """Inverse-transform the fitted Macdonald shape back to phase space (n = 1).

    Returns (reconstructed b_s(rho), direct b_s(rho)).  The inverse is the
    radial Hankel integral (2 pi)^{-1} int_0^inf C M(R) J_0(R sqrt(rho)) R dR
    with J_0 from its integral representation.
    """
    report = fourier_macdonald_check(s, radii, q)
    c_fit = report.c_fit
    root = math.sqrt(rho)

    def integrand(R: float) -> float:
        # the product M(R) R stays finite as R -> 0; the mass below 1e-10
        # is negligible at the round-trip tolerance
        if R < 1e-10:
            return 0.0
        return c_fit * _macdonald_shape(s, R) * _bessel_j0(R * root) * R

    res = integrate_tanh_sinh(integrand, 0.0, 16.0, q)
    back = res.value / (2.0 * math.pi)
    direct = conformal_inverse_symbol(s, rho, 1, q)
    return back, direct


def laguerre_expansion_check(
    a: float,
    sigma: float,
    r_values: list[float],
    K: int,
    q: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Max relative deviation of the K-truncated Laguerre series from the closed form.

    Closed side: (2^{a+sigma} Gamma((a-sigma)/2) / (sqrt(pi) Gamma(sigma)))
    r^{-a-1+sigma} K_{(a+1-sigma)/2}(r^2/2).  Series side:
    (2/Gamma(a+1)) sum_{k<=K} [Gamma((2k+a+2-sigma)/2)/Gamma((2k+a+2+sigma)/2)]
    L_k^a(r^2) e^{-r^2/2}.  Note the series does not converge pointwise
    (the profile is not square integrable near 0); the truncated deviation
    oscillates at O(1) and this function reports it honestly.  See
    laguerre_coefficient_check for the convergent form of the identity.
    """
    if not (a > sigma > 0.0):
        raise ValueError(f"laguerre_expansion_check requires a > sigma > 0, got a={a}, sigma={sigma}")
    if any(r <= 0.0 for r in r_values):
        raise ValueError("r values must be positive")
    worst = 0.0
    for r in r_values:
        closed = _laguerre_closed_form(a, sigma, r)
        series = _laguerre_series(a, sigma, r, K)
        worst = max(worst, abs(series - closed) / abs(closed))
    return worst


def _laguerre_closed_form(a: float, sigma: float, r: float) -> float:
    nu = 0.5 * (a + 1.0 - sigma)
    log_c = (
        (a + sigma) * math.log(2.0)
        + log_gamma(0.5 * (a - sigma))
        - 0.5 * math.log(math.pi)
        - log_gamma(sigma)
    )
    return math.exp(log_c) * r ** (-a - 1.0 + sigma) * macdonald_k(nu, 0.5 * r * r)


def _laguerre_series(a: float, sigma: float, r: float, K: int) -> float:
    lag = laguerre_sequence(K, a, r * r)
    damp = math.exp(-0.5 * r * r)
    pre = 2.0 * math.exp(-log_gamma(a + 1.0))
    total = 0.0
    for k in range(K + 1):
        ratio = gamma_ratio(0.5 * (2 * k + a + 2 - sigma), 0.5 * (2 * k + a + 2 + sigma))
        total += ratio * lag[k] * damp
    return pre * total


def laguerre_coefficient_check(
    a: float, sigma: float, k_max: int, q: QuadratureSpec = DEFAULT_QUADRATURE
) -> tuple[float, float]:
    """Projection form of the expansion identity (this one converges).

    Computes the Laguerre coefficients of the closed Macdonald profile by
    orthogonality, c_k = (k!/Gamma(k+a+1)) int_0^inf G(r) L_k^a(r^2)
    e^{-r^2/2} 2 r^{2a+1} dr, and compares the ratios c_k/c_0 against the
    multiplier ratios.  Returns (max relative ratio deviation for
    1 <= k <= k_max, measured constant c_0 / claimed coefficient).
    """
    if not (a > sigma > 0.0):
        raise ValueError(f"laguerre_coefficient_check requires a > sigma > 0")

    def coefficient(k: int) -> float:
        def integrand(r: float) -> float:
            # G(r) r^{2a+1} ~ r^{2 sigma - 1} near 0; the mass below 1e-10
            # is negligible at the check tolerance
            if r < 1e-10:
                return 0.0
            lag = laguerre_sequence(k, a, r * r)[k]
            return (
                _laguerre_closed_form(a, sigma, r)
                * lag
                * math.exp(-0.5 * r * r)
                * 2.0
                * r ** (2.0 * a + 1.0)
            )

        res = integrate_tanh_sinh(integrand, 0.0, 10.0, q)
        return math.exp(log_gamma(k + 1.0) - log_gamma(k + a + 1.0)) * res.value

    def claimed(k: int) -> float:
        return gamma_ratio(0.5 * (2 * k + a + 2 - sigma), 0.5 * (2 * k + a + 2 + sigma))

    c0 = coefficient(0)
    worst = 0.0
    for k in range(1, k_max + 1):
        got = coefficient(k) / c0
        want = claimed(k) / claimed(0)
        worst = max(worst, abs(got - want) / abs(want))
    constant = c0 / (2.0 * math.exp(-log_gamma(a + 1.0)) * claimed(0))
    return worst, constant


def closed_form_arbitration(
    m_values: list[int],
    rho_values: list[float],
    q: QuadratureSpec = DEFAULT_QUADRATURE,
) -> ArbitrationReport:
    """Both closed-form coefficient families against the Mehler quadrature.

    Declares the family whose worst relative deviation stays below 1e-10.
    """
    rows: list[dict] = []
    worst = {COEFF_PAPER_PRINTED: 0.0, COEFF_BINOMIAL: 0.0}
    for m in m_values:
        if m < 1:
            raise ValueError(f"half-dimension must be >= 1, got {m}")
        for rho in rho_values:
            oracle = integrate_mehler(lambda u: math.exp(-u * rho), 2 * m, q).value
            for family in (COEFF_BINOMIAL, COEFF_PAPER_PRINTED):
                closed = closed_even_symbol(rho, m, family)
                dev = abs(closed - oracle) / abs(oracle)
                worst[family] = max(worst[family], dev)
                rows.append(
                    {
                        "family": family,
                        "m": m,
                        "rho": rho,
                        "closed": closed,
                        "quadrature": oracle,
                        "rel_dev": dev,
                    }
                )
    matching = min(worst, key=worst.get)
    return ArbitrationReport(rows=rows, max_dev=worst, matching_family=matching)


# ---------------------------------------------------------------------------
# batch suites (consumed by the CLI; records are flat dicts ready for CSV)
# ---------------------------------------------------------------------------

SPECTRAL_TOL = 1e-5
FOURIER_TOL = 1e-3
LAGUERRE_TOL = 1e-6
GR_TOL = 1e-9
GEVREY_CAP = 8.0


def suite_spectral(grid, q: QuadratureSpec = DEFAULT_QUADRATURE, k_max: int = 8) -> SuiteResult:
    from .quantize import GridSpec, eigen_residual, expected_multiplier

    if grid is None:
        grid = GridSpec()
    families = [
        SymbolSpec.heat(0.25),
        SymbolSpec.heat(1.0),
        SymbolSpec.inverse_power(0.5),
        SymbolSpec.inverse_power(1.0),
        SymbolSpec.conformal_inverse(0.5),
        SymbolSpec.conformal_inverse(1.0),
    ]
    records = []
    passed = True
    for spec in families:
        param = spec.t if spec.family == "heat" else spec.s
        for k in range(k_max + 1):
            lam, resid = eigen_residual(spec, k, grid, q)
            want = expected_multiplier(spec, k)
            rel = abs(lam - want) / abs(want)
            ok = rel <= SPECTRAL_TOL and resid <= SPECTRAL_TOL
            passed = passed and ok
            records.append(
                {
                    "family": spec.family,
                    "param": param,
                    "k": k,
                    "lambda_hat": lam,
                    "expected": want,
                    "rel_err": rel,
                    "residual": resid,
                    "passed": int(ok),
                }
            )
    return SuiteResult(
        name="spectral",
        passed=passed,
        records=records,
        summary={"grid_L": grid.L, "grid_N": grid.N, "tolerance": SPECTRAL_TOL},
    )


def suite_gevrey(
    q: QuadratureSpec = DEFAULT_QUADRATURE,
    alpha_max: int = 10,
    rho_grid: tuple = (1.0, 4.0, 16.0, 64.0, 100.0),
    n: int = 1,
) -> SuiteResult:
    records = []
    passed = True
    summary = {"cap": GEVREY_CAP}
    for s in (0.5, 1.0):
        for r in (0.0, 0.5, 1.0):
            report = gevrey_scan(s, r, alpha_max, list(rho_grid), n, q)
            ok = math.isfinite(report.max_c_emp) and report.max_c_emp <= GEVREY_CAP
            passed = passed and ok
            summary[f"max_c_emp_s{s}_r{r}"] = report.max_c_emp
            for rec in report.records:
                records.append(
                    {
                        "alpha": f"{rec.alpha[0]};{rec.alpha[1]}",
                        "abs_alpha": sum(rec.alpha),
                        "s": s,
                        "r": r,
                        "rho": rec.rho,
                        "lhs": rec.lhs,
                        "bound_core": rec.bound_core,
                        "c_emp": rec.c_emp,
                    }
                )
    return SuiteResult(name="gevrey", passed=passed, records=records, summary=summary)


def suite_fourier(
    q: QuadratureSpec = DEFAULT_QUADRATURE, radii: tuple = (0.5, 1.0, 2.0, 4.0)
) -> SuiteResult:
    records = []
    passed = True
    summary = {"tolerance": FOURIER_TOL}
    for s in (0.5, 1.0):
        report = fourier_macdonald_check(s, list(radii), q)
        summary[f"c_fit_s{s}"] = report.c_fit
        ok = report.max_deviation <= FOURIER_TOL
        passed = passed and ok
        for R, dev in zip(report.radii, report.deviations):
            records.append(
                {
                    "s": s,
                    "radius": R,
                    "c_fit": report.c_fit,
                    "rel_dev": dev,
                    "passed": int(dev <= FOURIER_TOL),
                }
            )
    return SuiteResult(name="fourier", passed=passed, records=records, summary=summary)


def suite_laguerre(
    q: QuadratureSpec = DEFAULT_QUADRATURE,
    K: int = 300,
    r_values: tuple = (0.5, 1.0, 2.0),
) -> SuiteResult:
    records = []
    passed = True
    summary = {"tolerance": LAGUERRE_TOL, "K": K}
    for a, sigma in ((1.0, 0.5), (2.0, 1.0)):
        for r in r_values:
            dev = laguerre_expansion_check(a, sigma, [r], K, q)
            ok = dev <= LAGUERRE_TOL
            passed = passed and ok
            records.append(
                {
                    "check": "truncated-series",
                    "a": a,
                    "sigma": sigma,
                    "r": r,
                    "K": K,
                    "rel_dev": dev,
                    "passed": int(ok),
                }
            )
        coeff_dev, constant = laguerre_coefficient_check(a, sigma, 8, q)
        summary[f"coefficient_max_dev_a{a}_sigma{sigma}"] = coeff_dev
        summary[f"measured_constant_a{a}_sigma{sigma}"] = constant
        records.append(
            {
                "check": "coefficient-ratios",
                "a": a,
                "sigma": sigma,
                "r": 0.0,
                "K": 8,
                "rel_dev": coeff_dev,
                "passed": int(coeff_dev <= 1e-8),
            }
        )
    return SuiteResult(name="laguerre", passed=passed, records=records, summary=summary)


def suite_arbitration(
    q: QuadratureSpec = DEFAULT_QUADRATURE,
    m_values: tuple = (1, 2, 3),
    rho_values: tuple = (0.5, 1.0, 5.0, 20.0),
) -> SuiteResult:
    report = closed_form_arbitration(list(m_values), list(rho_values), q)
    binomial_ok = report.max_dev[COEFF_BINOMIAL] <= 1e-10
    printed_deviates = report.max_dev[COEFF_PAPER_PRINTED] > 1e-3
    passed = binomial_ok and printed_deviates and report.matching_family == COEFF_BINOMIAL
    return SuiteResult(
        name="arbitration",
        passed=passed,
        records=report.rows,
        summary={
            "matching_family": report.matching_family,
            "max_dev_binomial": report.max_dev[COEFF_BINOMIAL],
            "max_dev_paper_printed": report.max_dev[COEFF_PAPER_PRINTED],
        },
    )


def suite_gr_identity(
    q: QuadratureSpec = DEFAULT_QUADRATURE, samples: int = 20, seed: int = 20260810
) -> SuiteResult:
    rng = np.random.default_rng(seed)
    records = []
    passed = True
    for i in range(samples):
        beta = float(rng.uniform(0.3, 2.0))
        nu = float(rng.uniform(-0.5, 2.5))
        mu = beta * nu + float(rng.uniform(1.2, 5.0)) * beta
        lhs, rhs, resid = gr_identity_check(mu, beta, nu, q)
        ok = resid <= GR_TOL * max(1.0, abs(rhs))
        passed = passed and ok
        records.append(
            {
                "sample": i,
                "mu": mu,
                "beta": beta,
                "nu": nu,
                "lhs": lhs,
                "rhs": rhs,
                "residual": resid,
                "passed": int(ok),
            }
        )
    return SuiteResult(
        name="gr-identity",
        passed=passed,
        records=records,
        summary={"tolerance": GR_TOL, "seed": seed},
    )


SUITES = ("spectral", "gevrey", "fourier", "laguerre", "arbitration", "gr-identity")


def run_suite(name: str, grid=None, q: QuadratureSpec = DEFAULT_QUADRATURE) -> SuiteResult:
    if name == "spectral":
        return suite_spectral(grid, q)
    if name == "gevrey":
        return suite_gevrey(q)
    if name == "fourier":
        return suite_fourier(q)
    if name == "laguerre":
        return suite_laguerre(q)
    if name == "arbitration":
        return suite_arbitration(q)
    if name == "gr-identity":
        return suite_gr_identity(q)
    raise ValueError(f"unknown suite {name!r}")
