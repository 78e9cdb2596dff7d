"""
Tests for the grid Hamiltonian.

Tests operator assembly including:
- Kinetic operators (tight-binding and Fourier grid)
- Potential surface symmetry and small-phase harmonic limit
- Sparse structure and hermiticity
- Potential surface CSV dump
"""

import csv
import math

import numpy as np
import pytest

from xmoncoupler.equilibrium import equilibrium
from xmoncoupler.errors import OutputError
from xmoncoupler.exact.hamiltonian import (
    assemble_hamiltonian,
    dump_potential_csv,
    harmonic_potential,
    hopping_energy,
    kinetic_matrix_1d,
    potential_surface,
)
from xmoncoupler.linear import linear_network
from xmoncoupler.schemas import GridSpec


class TestKinetic:
    """One-dimensional kinetic operators."""

    def test_tight_binding_stencil(self, table_params):
        grid = GridSpec(n_points=11, kinetic="tight_binding")
        t = hopping_energy(table_params.C1, table_params, grid)
        matrix = kinetic_matrix_1d(table_params.C1, table_params, grid).toarray()
        assert matrix[5, 5] == pytest.approx(2 * t)
        assert matrix[5, 4] == pytest.approx(-t)
        assert matrix[5, 7] == 0.0

    def test_fourier_grid_entries(self, table_params):
        grid = GridSpec(n_points=11, kinetic="fourier")
        t = hopping_energy(table_params.C1, table_params, grid)
        matrix = kinetic_matrix_1d(table_params.C1, table_params, grid).toarray()
        assert matrix[3, 3] == pytest.approx(t * math.pi ** 2 / 3)
        assert matrix[3, 4] == pytest.approx(-2 * t)
        assert matrix[3, 5] == pytest.approx(2 * t / 4)
        np.testing.assert_allclose(matrix, matrix.T)

    def test_hopping_scales_with_grid_spacing(self, table_params):
        coarse = hopping_energy(table_params.C1, table_params, GridSpec(n_points=21))
        fine = hopping_energy(table_params.C1, table_params, GridSpec(n_points=41))
        assert fine / coarse == pytest.approx(4.0)


class TestPotentialSurface:
    """Massless-minimized potential on the grid."""

    def test_zero_at_origin(self, table_params, small_grid):
        surface = potential_surface(table_params, equilibrium(table_params, 1.0), small_grid)
        m = small_grid.half_count
        assert surface.U[m, m] == 0.0
        assert np.all(surface.U >= -1e-12 * np.max(surface.U))

    def test_exchange_inversion_symmetry(self, table_params, small_grid):
        surface = potential_surface(table_params, equilibrium(table_params, 1.0), small_grid)
        U = surface.U
        exchanged = U[::-1, ::-1].T
        assert np.max(np.abs(U - exchanged)) < 1e-12 * np.max(np.abs(U))

    def test_plain_exchange_symmetry_when_sine_vanishes(self, table_params, small_grid):
        surface = potential_surface(table_params, equilibrium(table_params, math.pi), small_grid)
        U = surface.U
        assert np.max(np.abs(U - U.T)) < 1e-12 * np.max(np.abs(U))

    def test_harmonic_limit_near_origin(self, table_params):
        grid = GridSpec(n_points=61)
        eq = equilibrium(table_params, 0.8)
        net = linear_network(table_params, eq)
        full = potential_surface(table_params, eq, grid, net=net)
        quad = potential_surface(table_params, eq, grid, potential="harmonic", net=net)
        m = grid.half_count
        window = (slice(m - 1, m + 2), slice(m - 1, m + 2))
        centre = np.abs(quad.U[window]) > 0
        rel = np.abs(full.U[window] - quad.U[window])[centre] / np.abs(quad.U[window])[centre]
        assert np.max(rel) < 1e-2
        assert quad.xi1 is None

    def test_unknown_potential(self, table_params, small_grid):
        with pytest.raises(ValueError):
            potential_surface(table_params, equilibrium(table_params, 0.0), small_grid, potential="cubic")

    def test_harmonic_potential_quadratic_form(self, table_params):
        net = linear_network(table_params, equilibrium(table_params, 0.0))
        scale = table_params.phi0_reduced ** 2
        value = harmonic_potential(net, 0.2, -0.1)
        expected = scale * (0.04 / (2 * net.Lq1) + 0.01 / (2 * net.Lq2) - 0.02 * net.Gamma11)
        assert value == pytest.approx(expected)


class TestAssembleHamiltonian:
    """Two-qubit operator assembly."""

    def test_shape_and_symmetry(self, table_params, small_grid):
        ham = assemble_hamiltonian(table_params, equilibrium(table_params, 0.4), small_grid)
        assert ham.dimension == 41 * 41
        difference = abs(ham.matrix - ham.matrix.T)
        assert difference.max() == 0.0

    def test_tight_binding_is_sparse(self, table_params, small_grid):
        ham = assemble_hamiltonian(table_params, equilibrium(table_params, 0.4), small_grid)
        assert ham.matrix.nnz <= 5 * ham.dimension

    def test_row_major_potential_diagonal(self, table_params, small_grid):
        ham = assemble_hamiltonian(table_params, equilibrium(table_params, 0.4), small_grid)
        n = small_grid.n_points
        t1 = hopping_energy(table_params.C1, table_params, small_grid)
        t2 = hopping_energy(table_params.C2, table_params, small_grid)
        i1, i2 = 3, 17
        assert ham.matrix[i1 * n + i2, i1 * n + i2] == pytest.approx(ham.surface.U[i1, i2] + 2 * t1 + 2 * t2)

    def test_exchange_inversion_commutes(self, table_params, small_grid):
        ham = assemble_hamiltonian(table_params, equilibrium(table_params, 2.2), small_grid)
        n = small_grid.n_points
        perm = np.arange(n * n).reshape(n, n)[::-1, ::-1].T.ravel()
        permuted = ham.matrix[perm][:, perm]
        scale = abs(ham.matrix).max()
        assert abs(permuted - ham.matrix).max() < 1e-12 * scale


class TestDumpPotential:
    """Potential surface CSV."""

    def test_writes_every_grid_point(self, table_params, tmp_path):
        grid = GridSpec(n_points=5)
        surface = potential_surface(table_params, equilibrium(table_params, 0.0), grid)
        path = tmp_path / "surface.csv"
        dump_potential_csv(path, surface)
        with open(path, newline="") as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["phi1", "phi2", "U_J"]
        assert len(rows) == 1 + 25
        assert float(rows[1][0]) == pytest.approx(-math.pi)
        assert float(rows[13][2]) == 0.0

    def test_missing_directory_raises_output_error(self, table_params, tmp_path):
        surface = potential_surface(table_params, equilibrium(table_params, 0.0), GridSpec(n_points=5))
        path = tmp_path / "missing" / "surface.csv"
        with pytest.raises(OutputError) as excinfo:
            dump_potential_csv(path, surface)
        assert excinfo.value.context["path"] == str(path)
