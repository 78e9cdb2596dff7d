"""
Single-qubit anharmonicity from a 1D grid Hamiltonian.

The qubit phase runs along the grid while the other qubit sits at phi = 0;
both massless phases are minimized at every point. The bias is normally the
coupling zero (or an open coupler), so the other qubit does not shift the
levels at linear order.
"""

from typing import Tuple

import numpy as np
from scipy import linalg

from xmoncoupler.equilibrium import EquilibriumState
from xmoncoupler.exact.hamiltonian import kinetic_matrix_1d
from xmoncoupler.exact.massless import minimize_massless_batch
from xmoncoupler.linear import linear_network
from xmoncoupler.logging_metrics import track_phase
from xmoncoupler.metrics import track_eigensolve
from xmoncoupler.schemas import CircuitParams, GridSpec


@track_eigensolve("tridiagonal")
def _lowest_three_tridiagonal(diagonal: np.ndarray, off_diagonal: np.ndarray) -> np.ndarray:
    return linalg.eigh_tridiagonal(
        diagonal, off_diagonal, eigvals_only=True, select="i", select_range=(0, 2)
    )


@track_eigensolve("dense")
def _lowest_three_dense(matrix: np.ndarray) -> np.ndarray:
    return linalg.eigh(matrix, eigvals_only=True, subset_by_index=[0, 2])


def qubit_potential_line(
    params: CircuitParams, eq: EquilibriumState, grid: GridSpec, qubit: int = 1, potential: str = "nonlinear"
) -> np.ndarray:
    """Potential (joules) along one qubit's phase with the other qubit at zero."""
    if qubit not in (1, 2):
        raise ValueError(f"qubit must be 1 or 2, got {qubit}")
    points = grid.points
    zeros = np.zeros_like(points)
    phi1, phi2 = (points, zeros) if qubit == 1 else (zeros, points)
    net = linear_network(params, eq)
    if potential == "harmonic":
        Lq = net.Lq1 if qubit == 1 else net.Lq2
        return params.phi0_reduced ** 2 * points * points / (2.0 * Lq)
    if potential != "nonlinear":
        raise ValueError(f"unknown potential: {potential!r}")
    solution = minimize_massless_batch(params, eq, phi1, phi2, net=net)
    return params.phi0_reduced ** 2 * solution.u


def lowest_levels_1d(
    params: CircuitParams, eq: EquilibriumState, grid: GridSpec, qubit: int = 1, potential: str = "nonlinear"
) -> Tuple[float, float, float]:
    """E0, E1, E2 (joules) of one qubit on a 1D grid."""
    U = qubit_potential_line(params, eq, grid, qubit=qubit, potential=potential)
    C = params.C1 if qubit == 1 else params.C2
    kinetic = kinetic_matrix_1d(C, params, grid)
    if grid.kinetic == "tight_binding":
        levels = _lowest_three_tridiagonal(kinetic.diagonal() + U, kinetic.diagonal(k=1))
    else:
        levels = _lowest_three_dense(kinetic.toarray() + np.diag(U))
    return float(levels[0]), float(levels[1]), float(levels[2])


def anharmonicity_1d(
    params: CircuitParams,
    eq: EquilibriumState,
    grid: GridSpec = GridSpec(n_points=801, kinetic="tight_binding"),
    qubit: int = 1,
    potential: str = "nonlinear",
) -> float:
    """
    eta = (E1 - E0) - (E2 - E1) of one qubit, in rad/s.

    Positive for a transmon-like qubit; zero up to discretisation error for
    the harmonic potential.
    """
    with track_phase("anharmonicity", n_points=grid.n_points, qubit=qubit):
        e0, e1, e2 = lowest_levels_1d(params, eq, grid, qubit=qubit, potential=potential)
    return ((e1 - e0) - (e2 - e1)) / params.hbar
