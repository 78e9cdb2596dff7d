"""
Tests for the labelled two-qubit spectrum.

Tests exact diagonalization including:
- Harmonic normal-mode splitting on the Fourier grid
- Swap-parity purity and state labels
- Sign of the splitting and agreement with the perturbative coupling
- Diagonal coupling against g_tot^2 / eta
- Constant-shift immunity and solver agreement
- Decoupled qubits and the coupling zero
- Grid convergence (slow)
"""

import dataclasses
import math

import numpy as np
import pytest
from scipy import sparse

import xmoncoupler.exact.spectrum as spectrum_module
from xmoncoupler.equilibrium import equilibrium, uncoupled_equilibrium
from xmoncoupler.errors import ConfigError, LabelAmbiguityError
from xmoncoupler.exact.anharmonicity import anharmonicity_1d
from xmoncoupler.exact.hamiltonian import assemble_hamiltonian
from xmoncoupler.exact.spectrum import (
    ANTISYM,
    DOUBLE,
    GROUND,
    SYM,
    harmonic_reference,
    lowest_eigenpairs,
    lowest_spectrum,
    solve_exact_point,
)
from xmoncoupler.linear import linear_network, transverse_g_linear
from xmoncoupler.nonlinear import delta_g, gamma_coefficients
from xmoncoupler.schemas import GridSpec

from tests.conftest import KHZ, MHZ

FOURIER_41 = GridSpec(n_points=41, kinetic="fourier")

# Fraction of the peak exact splitting; about 5.7% is reached at pi
PERTURBATIVE_SPLITTING_TOLERANCE = 0.07


def g_tot_at(params, phi):
    eq = equilibrium(params, phi)
    net = linear_network(params, eq)
    return transverse_g_linear(net) + delta_g(gamma_coefficients(params, eq, net), net)


class TestHarmonicLimit:
    """Quadratic potential reproduces the normal modes."""

    def test_normal_mode_splitting(self, table_params):
        eq = equilibrium(table_params, math.pi)
        net = linear_network(table_params, eq)
        ham = assemble_hamiltonian(table_params, eq, FOURIER_41, potential="harmonic")
        energies, _ = lowest_eigenpairs(ham.matrix, 3)
        splitting = (energies[2] - energies[1]) / table_params.hbar
        omega_sym = math.sqrt((1 / net.Lq1 + net.Gamma11) / table_params.C1)
        omega_anti = math.sqrt((1 / net.Lq1 - net.Gamma11) / table_params.C1)
        assert splitting == pytest.approx(abs(omega_anti - omega_sym), rel=1e-4)
        assert 0.5 * splitting == pytest.approx(abs(transverse_g_linear(net)), rel=1e-3)

    def test_ground_energy_is_zero_point(self, table_params):
        eq = equilibrium(table_params, math.pi)
        net = linear_network(table_params, eq)
        ham = assemble_hamiltonian(table_params, eq, FOURIER_41, potential="harmonic")
        energies, _ = lowest_eigenpairs(ham.matrix, 3)
        omega_sym = math.sqrt((1 / net.Lq1 + net.Gamma11) / table_params.C1)
        omega_anti = math.sqrt((1 / net.Lq1 - net.Gamma11) / table_params.C1)
        zero_point = 0.5 * table_params.hbar * (omega_sym + omega_anti)
        assert energies[0] == pytest.approx(zero_point, rel=1e-6)


class TestLabels:
    """Excitation classes and exchange parity."""

    def test_parity_purity_at_zero_flux(self, table_params, small_grid):
        result = solve_exact_point(table_params, equilibrium(table_params, 0.0), small_grid)
        for label, parity in zip(result.labels, result.parities):
            if label != "other":
                assert abs(parity) > 0.999
        assert result.labels[0] == GROUND
        assert {SYM, ANTISYM, DOUBLE} <= set(result.labels)

    def test_parity_purity_at_generic_flux(self, table_params, small_grid):
        result = solve_exact_point(table_params, equilibrium(table_params, 2.0), small_grid)
        for label, parity in zip(result.labels, result.parities):
            if label != "other":
                assert abs(parity) > 0.999

    def test_labelled_weights_dominate(self, table_params, small_grid):
        result = solve_exact_point(table_params, equilibrium(table_params, 0.0), small_grid)
        for label, weight in zip(result.labels, result.weights):
            if label in (GROUND, SYM, ANTISYM):
                assert weight > 0.9

    def test_missing_ground_state_is_ambiguous(self, table_params, small_grid, monkeypatch):
        ham = assemble_hamiltonian(table_params, equilibrium(table_params, 0.0), small_grid)

        def without_ground(matrix, k, solver="auto"):
            energies, vectors = lowest_eigenpairs(matrix, k + 1, solver=solver)
            return energies[1:], vectors[:, 1:]

        monkeypatch.setattr(spectrum_module, "lowest_eigenpairs", without_ground)
        with pytest.raises(LabelAmbiguityError) as excinfo:
            lowest_spectrum(ham)
        assert GROUND in excinfo.value.context["missing"]

    @pytest.mark.parametrize("k", [2, 4, 5])
    def test_too_few_eigenpairs_rejected(self, table_params, small_grid, k):
        ham = assemble_hamiltonian(table_params, equilibrium(table_params, 0.0), small_grid)
        with pytest.raises(ConfigError) as excinfo:
            lowest_spectrum(ham, k=k)
        assert excinfo.value.context == {"k": k}


class TestTransverseCoupling:
    """Splitting of the one-excitation pair."""

    def test_splitting_sign_follows_coupling(self, table_params, small_grid):
        at_zero = solve_exact_point(table_params, equilibrium(table_params, 0.0), small_grid)
        at_half = solve_exact_point(table_params, equilibrium(table_params, math.pi), small_grid)
        assert at_zero.signed_splitting > 0.0
        assert at_half.signed_splitting < 0.0
        assert at_zero.energy_of(SYM) < at_zero.energy_of(ANTISYM)

    @pytest.mark.parametrize("phi", [0.0, math.pi, 0.3 * math.pi])
    def test_agrees_with_perturbative_coupling(self, table_params, phi):
        grid = GridSpec(n_points=61, kinetic="fourier")
        result = solve_exact_point(table_params, equilibrium(table_params, phi), grid)
        peak = solve_exact_point(table_params, equilibrium(table_params, math.pi), grid).splitting
        expected = 2 * abs(g_tot_at(table_params, phi))
        assert abs(result.splitting - expected) <= PERTURBATIVE_SPLITTING_TOLERANCE * peak

    def test_perturbative_coupling_underestimates_peak(self, table_params):
        grid = GridSpec(n_points=61, kinetic="fourier")
        result = solve_exact_point(table_params, equilibrium(table_params, math.pi), grid)
        expected = 2 * abs(g_tot_at(table_params, math.pi))
        assert 0.03 < (result.splitting - expected) / result.splitting < PERTURBATIVE_SPLITTING_TOLERANCE


class TestDiagonalCoupling:
    """ZZ shift from the 11 state."""

    @pytest.mark.parametrize("phi", [0.0, math.pi])
    def test_tracks_dispersive_estimate(self, table_params, phi):
        used, eq0 = uncoupled_equilibrium(table_params, "zero_coupling")
        eta = anharmonicity_1d(used, eq0)
        result = solve_exact_point(table_params, equilibrium(table_params, phi), FOURIER_41)
        estimate = g_tot_at(table_params, phi) ** 2 / eta
        assert result.J / KHZ > 100.0
        assert result.J == pytest.approx(estimate, rel=0.2)

    def test_two_qubit_eta_estimate(self, table_params):
        used, eq0 = uncoupled_equilibrium(table_params, "zero_coupling")
        result = solve_exact_point(used, eq0, FOURIER_41)
        assert result.eta is not None
        assert result.eta / MHZ == pytest.approx(213.0, abs=10.0)


class TestNumericalInvariance:
    """Observables independent of solver details."""

    def test_constant_shift_immunity(self, table_params, small_grid):
        ham = assemble_hamiltonian(table_params, equilibrium(table_params, 1.2), small_grid)
        shifted = dataclasses.replace(
            ham, matrix=(ham.matrix + 1e-23 * sparse.identity(ham.dimension, format="csr")).tocsr()
        )
        base = lowest_spectrum(ham)
        moved = lowest_spectrum(shifted)
        assert moved.splitting == pytest.approx(base.splitting, rel=1e-6)
        assert moved.J == pytest.approx(base.J, abs=2 * math.pi)
        assert moved.labels == base.labels

    def test_dense_and_sparse_solvers_agree(self, table_params):
        ham = assemble_hamiltonian(table_params, equilibrium(table_params, 0.7), GridSpec(n_points=31, kinetic="tight_binding"))
        dense, _ = lowest_eigenpairs(ham.matrix, 6, solver="dense")
        lanczos, _ = lowest_eigenpairs(ham.matrix, 6, solver="sparse")
        np.testing.assert_allclose(lanczos, dense, rtol=1e-8)

    def test_unknown_solver(self, table_params):
        ham = assemble_hamiltonian(table_params, equilibrium(table_params, 0.7), GridSpec(n_points=11))
        with pytest.raises(ValueError):
            lowest_eigenpairs(ham.matrix, 3, solver="arnoldi")

    def test_harmonic_reference_is_orthonormal(self):
        points = GridSpec(n_points=201).points
        basis = harmonic_reference(points, 0.39)
        np.testing.assert_allclose(basis.T @ basis, np.eye(3), atol=1e-10)


class TestDecoupledQubits:
    """An open coupler leaves degenerate, uncoupled qubits."""

    def test_no_splitting_and_no_zz(self, table_params, small_grid):
        used, eq = uncoupled_equilibrium(table_params, "open")
        result = lowest_spectrum(assemble_hamiltonian(used, eq, small_grid), solver="dense")
        assert result.splitting < 2 * math.pi * 1e3
        assert abs(result.J) < 2 * math.pi * 10.0
        for label, parity in zip(result.labels, result.parities):
            if label != "other":
                assert abs(parity) > 0.999


@pytest.mark.slow
class TestConvergence:
    """Grid convergence of the exact observables."""

    @pytest.mark.parametrize("phi", [0.3 * math.pi, 0.5 * math.pi, math.pi])
    def test_splitting_converges_on_tight_binding_grid(self, table_params, phi):
        eq = equilibrium(table_params, phi)
        values = [solve_exact_point(table_params, eq, GridSpec(n_points=n, kinetic="tight_binding")).splitting for n in (41, 61, 81)]
        for old, new in zip(values, values[1:]):
            assert abs(new - old) / abs(new) < 0.01

    @pytest.mark.parametrize("phi", [0.0, math.pi])
    def test_zz_converges_on_fourier_grid(self, table_params, phi):
        eq = equilibrium(table_params, phi)
        values = [
            solve_exact_point(table_params, eq, GridSpec(n_points=n, kinetic="fourier")).J
            for n in (41, 51, 61)
        ]
        for old, new in zip(values, values[1:]):
            assert abs(new - old) / abs(new) < 0.01

    def test_splitting_dips_at_coupling_zero(self, table_params, small_grid):
        splittings = [
            solve_exact_point(table_params, equilibrium(table_params, f * math.pi), small_grid).splitting
            for f in np.arange(0.590, 0.6061, 0.002)
        ]
        assert min(splittings) / MHZ < 0.1
