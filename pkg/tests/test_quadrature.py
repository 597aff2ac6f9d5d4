import math

import numpy as np
import pytest

from hermite_weyl.quadrature import (
    DEFAULT_QUADRATURE,
    IntegralResult,
    QuadratureSpec,
    gr_identity_check,
    integrate_finite,
    integrate_mehler,
    integrate_power_endpoint,
    integrate_tanh_sinh,
)

Q = DEFAULT_QUADRATURE

# Gamma(1/2) * b_{1/2}(rho=1, n=1), frozen from a 30-digit evaluation of
# the defining time integral
GAMMA_HALF_B_HALF_RHO1 = 1.6547516317371482


class TestQuadratureSpec:
    def test_defaults(self):
        assert Q.rel_tol == 1e-11 and Q.abs_tol == 1e-14
        assert Q.base_nodes == 16 and Q.max_depth == 18

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"rel_tol": 0.0},
            {"abs_tol": -1.0},
            {"max_depth": 0},
            {"base_nodes": 4},
            {"base_nodes": 100},
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            QuadratureSpec(**kwargs)


class TestIntegrateFinite:
    def test_exponential(self):
        r = integrate_finite(lambda t: math.exp(-t), 0.0, 1.0, Q)
        assert r.converged
        assert r.value == pytest.approx(1.0 - math.exp(-1.0), rel=1e-13)

    def test_polynomial(self):
        r = integrate_finite(lambda t: t * t, 0.0, 1.0, Q)
        assert r.value == pytest.approx(1.0 / 3.0, rel=1e-14)

    def test_arcsin_near_endpoint(self):
        eps = 1e-6
        r = integrate_finite(lambda t: 1.0 / math.sqrt(1.0 - t * t), 0.0, 1.0 - eps, Q)
        assert r.converged
        assert r.value == pytest.approx(math.asin(1.0 - eps), rel=1e-11)

    def test_linearity(self):
        f = lambda t: math.sin(t)
        g = lambda t: math.exp(0.3 * t)
        a, b = 0.2, 2.7
        lhs = integrate_finite(lambda t: 2.0 * f(t) - 5.0 * g(t), a, b, Q).value
        rhs = 2.0 * integrate_finite(f, a, b, Q).value - 5.0 * integrate_finite(g, a, b, Q).value
        assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_interval_additivity(self):
        f = lambda t: math.cos(3.0 * t) * math.exp(-t)
        whole = integrate_finite(f, 0.0, 4.0, Q).value
        split = integrate_finite(f, 0.0, 1.3, Q).value + integrate_finite(f, 1.3, 4.0, Q).value
        assert whole == pytest.approx(split, abs=1e-12)

    def test_converged_error_contract(self):
        r = integrate_finite(lambda t: math.exp(-t * t), -3.0, 3.0, Q)
        assert r.converged
        assert r.err_estimate <= max(Q.abs_tol, Q.rel_tol * abs(r.value))

    def test_nonconvergence_reported_not_raised(self):
        wiggly = lambda t: math.cos(2000.0 * t)
        r = integrate_finite(wiggly, 0.0, 1.0, QuadratureSpec(max_depth=2))
        assert not r.converged

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            integrate_finite(math.exp, 1.0, 0.0, Q)

    def test_deterministic(self):
        f = lambda t: math.exp(-t) * math.sin(5.0 * t)
        r1 = integrate_finite(f, 0.0, 3.0, Q)
        r2 = integrate_finite(f, 0.0, 3.0, Q)
        assert r1.value == r2.value and r1.evaluations == r2.evaluations


class TestTanhSinh:
    def test_smooth(self):
        r = integrate_tanh_sinh(lambda t: math.exp(-t), 0.0, 1.0, Q)
        assert r.converged
        assert r.value == pytest.approx(1.0 - math.exp(-1.0), rel=1e-13)

    def test_inverse_sqrt_endpoint(self):
        r = integrate_tanh_sinh(lambda t: 1.0 / math.sqrt(t), 0.0, 1.0, Q)
        assert r.value == pytest.approx(2.0, rel=1e-9)

    def test_both_endpoints_singular(self):
        r = integrate_tanh_sinh(lambda t: 1.0 / math.sqrt(1.0 - t * t), -1.0, 1.0, Q)
        assert r.value == pytest.approx(math.pi, rel=1e-8)

    def test_result_addition(self):
        a = IntegralResult(1.0, 1e-13, 10, True)
        b = IntegralResult(2.0, 1e-13, 20, False)
        c = a + b
        assert c.value == 3.0 and c.evaluations == 30 and not c.converged


class TestIntegrateMehler:
    def test_constant_n2(self):
        assert integrate_mehler(lambda u: 1.0, 2, Q).value == pytest.approx(1.0, rel=1e-12)

    def test_constant_n1(self):
        assert integrate_mehler(lambda u: 1.0, 1, Q).value == pytest.approx(
            math.pi / 2.0, rel=1e-12
        )

    def test_exponential_n2(self):
        assert integrate_mehler(lambda u: math.exp(-u), 2, Q).value == pytest.approx(
            1.0 - math.exp(-1.0), rel=1e-12
        )

    @pytest.mark.parametrize("n", [2, 3, 4, 7])
    def test_two_code_paths_one_answer(self, n):
        # double-exponential route against plain adaptive integration of
        # the same weighted integrand
        F = lambda u: math.exp(-1.7 * u)
        direct = integrate_finite(
            lambda u: F(u) * (1.0 - u * u) ** (0.5 * n - 1.0), 0.0, 1.0, Q
        )
        routed = integrate_mehler(F, n, Q)
        assert abs(routed.value - direct.value) <= 1e-11

    def test_invalid_dimension(self):
        with pytest.raises(ValueError):
            integrate_mehler(lambda u: 1.0, 0, Q)


class TestIntegratePowerEndpoint:
    def test_s_one_gamma(self):
        r = integrate_power_endpoint(lambda t: math.exp(-t), 1.0, Q)
        assert r.converged
        assert r.value == pytest.approx(1.0, rel=1e-11)

    def test_s_half_gamma(self):
        r = integrate_power_endpoint(lambda t: math.exp(-t), 0.5, Q)
        assert r.value == pytest.approx(math.sqrt(math.pi), rel=1e-11)

    def test_mehler_type_integrand(self):
        # int_0^inf t^{-1/2} sech(t) e^{-tanh t} dt = Gamma(1/2) b_{1/2}(1)
        def g(t):
            e = math.exp(-t)
            return (2.0 * e / (1.0 + e * e)) * math.exp(-math.tanh(t))

        r = integrate_power_endpoint(g, 0.5, Q)
        assert r.converged
        assert r.value == pytest.approx(GAMMA_HALF_B_HALF_RHO1, rel=1e-10)

    def test_spectral_series_oracle_agreement(self):
        # the multiplier-series oracle for the same quantity converges only
        # slowly (measured ~3e-3 at K=400), so the comparison runs at an
        # honest tolerance
        from hermite_weyl.symbols import spectral_series_symbol

        series = math.gamma(0.5) * spectral_series_symbol(
            lambda lam: lam**-0.5, 400, 1.0, 1
        )
        assert series == pytest.approx(GAMMA_HALF_B_HALF_RHO1, rel=2e-2)

    @pytest.mark.parametrize("s", [0.0, 1.5, -0.2])
    def test_invalid_order(self, s):
        with pytest.raises(ValueError):
            integrate_power_endpoint(lambda t: math.exp(-t), s, Q)


class TestGrIdentity:
    def test_elementary_case(self):
        # int_0^inf e^{-3t} sinh(t) dt = 1/2 (1/2 - 1/4) = 1/8
        lhs, rhs, resid = gr_identity_check(3.0, 1.0, 1.0, Q)
        assert lhs == pytest.approx(0.125, rel=1e-12)
        assert rhs == pytest.approx(0.125, rel=1e-12)
        assert resid <= 1e-10

    @pytest.mark.parametrize("args", [(5.0, 1.0, 2.0), (2.5, 0.5, 1.2)])
    def test_spec_cases(self, args):
        lhs, rhs, resid = gr_identity_check(*args, Q)
        assert resid <= 1e-10 * max(1.0, abs(rhs))

    def test_seeded_sample_of_validity_region(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            beta = float(rng.uniform(0.3, 2.0))
            nu = float(rng.uniform(-0.5, 2.5))
            mu = beta * nu + float(rng.uniform(1.2, 5.0)) * beta
            lhs, rhs, resid = gr_identity_check(mu, beta, nu, Q)
            assert resid <= 1e-9 * max(1.0, abs(rhs)), (mu, beta, nu)

    @pytest.mark.parametrize(
        "mu,beta,nu",
        [(1.0, -0.5, 0.5), (1.0, 1.0, -1.5), (0.5, 1.0, 1.0)],
    )
    def test_precondition_violations(self, mu, beta, nu):
        with pytest.raises(ValueError):
            gr_identity_check(mu, beta, nu, Q)
