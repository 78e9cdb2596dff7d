"""
Grid Hamiltonian of the two coupled qubits.

The qubit phases phi1, phi2 are discretised on a square grid; the state
index is row-major, i1 * n + i2. The kinetic energy of qubit i is
-(hbar^2 / (2 C_i (Phi0/2pi)^2)) d^2/dphi_i^2, discretised either with
nearest-neighbour hopping plus the Laplacian diagonal ("tight_binding") or
with the Fourier-grid (sinc) operator ("fourier"). The potential is the
massless-minimized potential measured from the DC equilibrium, or its
quadratic part U0 ("harmonic").
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
from scipy import sparse

from xmoncoupler.equilibrium import EquilibriumState
from xmoncoupler.exact.massless import minimize_massless_batch
from xmoncoupler.linear import LinearNetwork, linear_network
from xmoncoupler.logging_metrics import track_phase
from xmoncoupler.output import writing
from xmoncoupler.schemas import CircuitParams, GridSpec

POTENTIALS = ("nonlinear", "harmonic")


@dataclass(frozen=True)
class PotentialSurface:
    """Potential U (joules) on the grid, U[i1, i2] at (points[i1], points[i2])."""
    points: np.ndarray
    U: np.ndarray
    xi1: Optional[np.ndarray] = None
    xi2: Optional[np.ndarray] = None


@dataclass(frozen=True)
class CouplerHamiltonian:
    """Assembled operator with the context needed to interpret its eigenstates."""
    matrix: sparse.csr_matrix
    grid: GridSpec
    params: CircuitParams
    eq: EquilibriumState
    net: LinearNetwork
    surface: PotentialSurface

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def hopping_energy(C: float, params: CircuitParams, grid: GridSpec) -> float:
    """t = hbar^2 / (2 C (Phi0/2pi)^2 dphi^2) in joules."""
    return params.hbar ** 2 / (2.0 * C * params.phi0_reduced ** 2 * grid.d_phi ** 2)


def kinetic_matrix_1d(C: float, params: CircuitParams, grid: GridSpec) -> sparse.csr_matrix:
    """One-qubit kinetic operator on the grid (joules)."""
    n = grid.n_points
    t = hopping_energy(C, params, grid)
    if grid.kinetic == "tight_binding":
        return sparse.diags(
            [np.full(n - 1, -t), np.full(n, 2.0 * t), np.full(n - 1, -t)],
            offsets=[-1, 0, 1],
            format="csr",
        )
    # Fourier grid: T_ii = t pi^2 / 3, T_ij = t 2 (-1)^(i-j) / (i-j)^2
    offset = np.subtract.outer(np.arange(n), np.arange(n))
    sign = np.where(offset % 2 == 0, 1.0, -1.0)
    dense = np.where(
        offset == 0,
        t * np.pi ** 2 / 3.0,
        t * 2.0 * sign / np.maximum(offset * offset, 1),
    )
    return sparse.csr_matrix(dense)


def harmonic_potential(net: LinearNetwork, phi1, phi2) -> np.ndarray:
    """U0 = (Phi0/2pi)^2 [phi1^2/(2Lq1) + phi2^2/(2Lq2) + Gamma11 phi1 phi2] (joules)."""
    scale = net.params.phi0_reduced ** 2
    return scale * ((phi1 * phi1 / (2.0 * net.Lq1) + phi2 * phi2 / (2.0 * net.Lq2))
                    + net.Gamma11 * phi1 * phi2)


def potential_surface(
    params: CircuitParams,
    eq: EquilibriumState,
    grid: GridSpec,
    potential: str = "nonlinear",
    net: Optional[LinearNetwork] = None,
) -> PotentialSurface:
    """Evaluate the two-qubit potential on every grid point."""
    if potential not in POTENTIALS:
        raise ValueError(f"unknown potential: {potential!r}")
    if net is None:
        net = linear_network(params, eq)
    points = grid.points
    phi1, phi2 = np.meshgrid(points, points, indexing="ij")
    if potential == "harmonic":
        return PotentialSurface(points=points, U=harmonic_potential(net, phi1, phi2))
    with track_phase("massless_minimization", n_points=grid.n_points):
        solution = minimize_massless_batch(params, eq, phi1, phi2, net=net)
    return PotentialSurface(
        points=points,
        U=params.phi0_reduced ** 2 * solution.u,
        xi1=solution.xi1,
        xi2=solution.xi2,
    )


def assemble_hamiltonian(
    params: CircuitParams,
    eq: EquilibriumState,
    grid: GridSpec,
    potential: str = "nonlinear",
) -> CouplerHamiltonian:
    """
    Sparse Hamiltonian T1 (x) I + I (x) T2 + diag(U) on the n x n grid.

    Raises:
        NonConvergenceError, SaddlePointError: from the massless minimization
    """
    net = linear_network(params, eq)
    surface = potential_surface(params, eq, grid, potential=potential, net=net)
    n = grid.n_points
    identity = sparse.identity(n, format="csr")
    kinetic = (sparse.kron(kinetic_matrix_1d(params.C1, params, grid), identity)
               + sparse.kron(identity, kinetic_matrix_1d(params.C2, params, grid)))
    matrix = (kinetic + sparse.diags(surface.U.ravel())).tocsr()
    return CouplerHamiltonian(
        matrix=matrix, grid=grid, params=params, eq=eq, net=net, surface=surface
    )


def dump_potential_csv(path: Union[str, Path], surface: PotentialSurface) -> None:
    """Write phi1, phi2, U rows (radians, radians, joules) for inspection."""
    points = surface.points
    with writing(path), open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["phi1", "phi2", "U_J"])
        for i1, p1 in enumerate(points):
            for i2, p2 in enumerate(points):
                writer.writerow([f"{p1:.17e}", f"{p2:.17e}", f"{surface.U[i1, i2]:.17e}"])
