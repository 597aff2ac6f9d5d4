import math

import numpy as np
import pytest

from hermite_weyl.quadrature import DEFAULT_QUADRATURE
from hermite_weyl.quantize import (
    GridFunction,
    GridSpec,
    apply_operator,
    build_kernel,
    conformal_inverse_multiplier,
    eigen_residual,
    expected_multiplier,
    heat_multiplier,
    hermite_coefficients,
    hermite_grid_function,
    hermite_on_grid,
    inverse_power_multiplier,
    radial_profile,
    spectral_apply,
    u_s_multiplier,
)
from hermite_weyl.special import gamma_ratio
from hermite_weyl.symbols import SymbolSpec, symbol_value

Q = DEFAULT_QUADRATURE
GRID = GridSpec(L=12.0, N=512)
SMALL = GridSpec(L=10.0, N=128)


def bump(grid: GridSpec) -> GridFunction:
    pts = grid.points()
    f = GridFunction(grid, np.exp(-((pts - 0.3) ** 2)))
    return GridFunction(grid, f.samples / f.norm())


class TestGridSpec:
    def test_spacing(self):
        assert GRID.h == pytest.approx(24.0 / 512)
        assert len(GRID.points()) == 512

    @pytest.mark.parametrize("kwargs", [{"L": 0.0}, {"N": 3}, {"N": 0}])
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            GridSpec(**{"L": 12.0, "N": 512, **kwargs})


class TestKernelFixture:
    def test_gaussian_symbol_closed_kernel(self):
        # symbol 2 e^{-rho} (ground-state projection): completing the square
        # in the y-integral gives K(xi, eta) = pi^{-1/2} e^{-(xi^2+eta^2)/2}
        kernel = build_kernel(SymbolSpec.projection(0, 1), SMALL, Q)
        pts = SMALL.points()
        want = math.pi**-0.5 * np.exp(-0.5 * (pts[:, None] ** 2 + pts[None, :] ** 2))
        assert np.max(np.abs(kernel.matrix - want)) <= 1e-12

    def test_kernel_symmetry(self):
        kernel = build_kernel(SymbolSpec.inverse_power(0.5), SMALL, Q)
        assert np.max(np.abs(kernel.matrix - kernel.matrix.T)) <= 1e-10

    def test_requires_one_dimension(self):
        with pytest.raises(ValueError):
            build_kernel(SymbolSpec.heat(1.0, n=2), SMALL, Q)


class TestApplyOperator:
    def test_zero_function(self):
        kernel = build_kernel(SymbolSpec.heat(0.5), SMALL, Q)
        zero = GridFunction(SMALL, np.zeros(SMALL.N))
        assert np.all(apply_operator(kernel, zero).samples == 0.0)

    def test_heat_ground_state(self):
        kernel = build_kernel(SymbolSpec.heat(0.5), SMALL, Q)
        phi = hermite_grid_function(0, SMALL)
        out = apply_operator(kernel, phi)
        resid = GridFunction(SMALL, out.samples - math.exp(-0.5) * phi.samples)
        assert resid.norm() <= 1e-6

    def test_heat_eigenfunctions_k_to_8(self):
        kernel = build_kernel(SymbolSpec.heat(0.5), GRID, Q)
        for k in range(9):
            phi = hermite_grid_function(k, GRID)
            out = apply_operator(kernel, phi)
            lam = out.dot(phi)
            assert lam == pytest.approx(math.exp(-(2 * k + 1) * 0.5), rel=1e-5)

    def test_linearity(self):
        kernel = build_kernel(SymbolSpec.heat(0.5), SMALL, Q)
        f = hermite_grid_function(1, SMALL)
        g = bump(SMALL)
        combo = GridFunction(SMALL, 2.0 * f.samples - 3.0 * g.samples)
        lhs = apply_operator(kernel, combo).samples
        rhs = 2.0 * apply_operator(kernel, f).samples - 3.0 * apply_operator(kernel, g).samples
        assert np.max(np.abs(lhs - rhs)) <= 1e-12

    def test_grid_mismatch(self):
        kernel = build_kernel(SymbolSpec.heat(0.5), SMALL, Q)
        with pytest.raises(ValueError):
            apply_operator(kernel, hermite_grid_function(0, GRID))

    def test_inverse_power_rayleigh_fifth(self):
        # <Op(b_1) h_2, h_2> = (2*2+1)^{-1}
        kernel = build_kernel(SymbolSpec.inverse_power(1.0), GRID, Q)
        phi = hermite_grid_function(2, GRID)
        lam = apply_operator(kernel, phi).dot(phi)
        assert lam == pytest.approx(0.2, abs=1e-6)

    def test_self_adjointness(self):
        kernel = build_kernel(SymbolSpec.inverse_power(0.5), SMALL, Q)
        f, g = hermite_grid_function(1, SMALL), bump(SMALL)
        lhs = apply_operator(kernel, f).dot(g)
        rhs = f.dot(apply_operator(kernel, g))
        assert abs(lhs - rhs) <= 1e-9


class TestHermiteCoefficients:
    def test_basis_vector(self):
        coeffs = hermite_coefficients(hermite_grid_function(3, GRID), 8)
        want = np.zeros(9)
        want[3] = 1.0
        assert np.max(np.abs(coeffs - want)) <= 1e-9

    def test_superposition(self):
        h0 = hermite_grid_function(0, GRID).samples
        h1 = hermite_grid_function(1, GRID).samples
        phi = GridFunction(GRID, (h0 + h1) / math.sqrt(2.0))
        coeffs = hermite_coefficients(phi, 4)
        assert coeffs[0] == pytest.approx(2.0**-0.5, abs=1e-12)
        assert coeffs[1] == pytest.approx(2.0**-0.5, abs=1e-12)
        assert np.max(np.abs(coeffs[2:])) <= 1e-12

    def test_parseval_for_bump(self):
        phi = GridFunction(GRID, np.exp(-((GRID.points() - 0.3) ** 2)))
        coeffs = hermite_coefficients(phi, 60)
        assert float(np.sum(coeffs**2)) == pytest.approx(phi.norm() ** 2, abs=1e-8)

    def test_k_cap(self):
        with pytest.raises(ValueError):
            hermite_coefficients(hermite_grid_function(0, GRID), 61)


class TestSpectralApply:
    def test_truncated_identity(self):
        phi = GridFunction(
            GRID,
            0.7 * hermite_grid_function(2, GRID).samples
            - 0.1 * hermite_grid_function(5, GRID).samples,
        )
        out = spectral_apply(lambda lam: 1.0, phi, 8)
        assert GridFunction(GRID, out.samples - phi.samples).norm() <= 1e-9

    def test_inverse_multiplier_on_h4(self):
        phi = hermite_grid_function(4, GRID)
        out = spectral_apply(lambda lam: 1.0 / lam, phi, 10)
        assert GridFunction(GRID, out.samples - phi.samples / 9.0).norm() <= 1e-10

    def test_u_s_multiplier_bounded_with_stirling_limit(self):
        # Gamma((lam+1+s)/2)/Gamma((lam+1-s)/2) ~ (lam/2)^s, so the bounded
        # relating multiplier tends to 2^{-s} (not 1) as k grows
        mult = u_s_multiplier(0.5)
        vals = [mult(2.0 * k + 1.0) for k in range(201)]
        assert all(math.isfinite(v) for v in vals)
        assert max(vals) < 2.0
        assert vals[200] == pytest.approx(2.0**-0.5, abs=1e-3)


class TestOracleEquivalence:
    @pytest.mark.parametrize(
        "spec,mult",
        [
            (SymbolSpec.heat(0.25), heat_multiplier(0.25)),
            (SymbolSpec.heat(1.0), heat_multiplier(1.0)),
            (SymbolSpec.inverse_power(0.5), inverse_power_multiplier(0.5)),
            (SymbolSpec.inverse_power(1.0), inverse_power_multiplier(1.0)),
            (SymbolSpec.conformal_inverse(0.5), conformal_inverse_multiplier(0.5)),
            (SymbolSpec.conformal_inverse(1.0), conformal_inverse_multiplier(1.0)),
        ],
    )
    def test_quantized_matches_spectral_oracle(self, spec, mult):
        from hermite_weyl.quantize import _cached_kernel

        kernel = _cached_kernel(spec, GRID, Q)
        functions = [hermite_grid_function(k, GRID) for k in range(7)] + [bump(GRID)]
        for phi in functions:
            lhs = apply_operator(kernel, phi)
            rhs = spectral_apply(mult, phi, 60)
            assert GridFunction(GRID, lhs.samples - rhs.samples).norm() <= 1e-5

    def test_grid_refinement_residuals_decrease(self):
        spec = SymbolSpec.heat(1.0)
        resids = []
        for N in (128, 256, 512):
            grid = GridSpec(L=12.0, N=N)
            _, resid = eigen_residual(spec, 0, grid, Q)
            resids.append(resid)
        assert resids[0] > resids[1] > resids[2] or resids[2] < 1e-12


class TestEigenResidual:
    def test_heat_t1_ground_state(self):
        lam, resid = eigen_residual(SymbolSpec.heat(1.0), 0, GRID, Q)
        assert lam == pytest.approx(math.exp(-1.0), rel=1e-6)
        assert resid <= 1e-6

    def test_inverse_power_half_k1(self):
        lam, resid = eigen_residual(SymbolSpec.inverse_power(0.5), 1, GRID, Q)
        assert lam == pytest.approx(3.0**-0.5, rel=1e-5)
        assert resid <= 1e-5

    def test_conformal_half_k1(self):
        lam, resid = eigen_residual(SymbolSpec.conformal_inverse(0.5), 1, GRID, Q)
        assert lam == pytest.approx(gamma_ratio(1.75, 2.25), rel=1e-5)
        assert resid <= 1e-5

    def test_k_cap(self):
        with pytest.raises(ValueError):
            eigen_residual(SymbolSpec.heat(1.0), 13, GRID, Q)

    def test_expected_multiplier_table(self):
        assert expected_multiplier(SymbolSpec.heat(0.25), 2) == pytest.approx(
            math.exp(-1.25), rel=1e-14
        )
        assert expected_multiplier(SymbolSpec.inverse_power(0.5), 1) == pytest.approx(
            3.0**-0.5, rel=1e-14
        )
        assert expected_multiplier(SymbolSpec.projection(2, 1), 2) == 1.0
        assert expected_multiplier(SymbolSpec.projection(2, 1), 3) == 0.0


class TestRadialProfile:
    @pytest.mark.parametrize(
        "spec",
        [
            SymbolSpec.heat(0.5),
            SymbolSpec.inverse_power(0.5),
            SymbolSpec.conformal_inverse(0.5),
            SymbolSpec.projection(3, 1),
        ],
    )
    def test_profile_matches_scalar_symbol(self, spec):
        rho_max = 289.0
        prof = radial_profile(spec, rho_max, Q)
        rhos = np.array([0.0, 0.37, 1.0, 11.3, 100.0, 288.0])
        got = prof(rhos)
        want = np.array([symbol_value(spec, float(r), Q) for r in rhos])
        assert np.max(np.abs(got - want) / np.maximum(np.abs(want), 1e-300)) <= 1e-9

    def test_spectral_series_profile(self):
        spec = SymbolSpec.spectral_series(lambda lam: math.exp(-0.5 * lam), 50, 1)
        prof = radial_profile(spec, 10.0, Q)
        rhos = np.array([0.0, 1.0, 4.0])
        want = np.array([symbol_value(spec, float(r), Q) for r in rhos])
        assert np.max(np.abs(prof(rhos) - want)) <= 1e-12


class TestHermiteGrid:
    def test_rows_match_scalar(self):
        from hermite_weyl.special import hermite_h

        pts = SMALL.points()
        H = hermite_on_grid(6, pts)
        for k in (0, 3, 6):
            want = np.array([hermite_h(k, t) for t in pts])
            assert np.max(np.abs(H[k] - want)) <= 1e-13
