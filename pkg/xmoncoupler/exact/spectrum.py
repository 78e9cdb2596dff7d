"""
Lowest eigenstates of the grid Hamiltonian and their classification.

Eigenpairs come from shift-invert Lanczos (scipy.sparse.linalg.eigsh) with a
shift just below the Gershgorin lower bound and a fixed random start vector,
or from a dense solver for small or dense operators.

Each eigenstate is classified by
- its excitation class (ground, one excitation, |11>, |20>/|02>), taken from
  the overlap weights with products of harmonic-oscillator functions of
  width phi01 on each qubit;
- its exchange parity. For a symmetric pair the Hamiltonian commutes with
  (phi1, phi2) -> (-phi2, -phi1); the swap parity reported is that parity
  times (-1)^(excitation number), which is the plain phi1 <-> phi2 parity
  whenever sin(delta) = 0.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.linalg import eigsh
from scipy.special import eval_hermite

from xmoncoupler.errors import ConfigError, LabelAmbiguityError
from xmoncoupler.exact.hamiltonian import CouplerHamiltonian, assemble_hamiltonian
from xmoncoupler.equilibrium import EquilibriumState
from xmoncoupler.logging_config import get_logger
from xmoncoupler.logging_metrics import track_phase
from xmoncoupler.metrics import track_eigensolve
from xmoncoupler.schemas import CircuitParams, GridSpec

logger = get_logger(__name__)

EIGEN_SEED = 7919
EIGSH_TOL = 1e-10
DENSE_DIMENSION_LIMIT = 41 * 41
# nonzeros per row above which the operator is treated as dense
DENSE_ROW_FILL = 32
PARITY_PURITY = 0.999
MIN_CLASS_WEIGHT = 0.5
# ground, one-excitation pair, 11 and the two-excitation pair
MIN_EIGENPAIRS = 6

GROUND = "ground"
SYM = "sym"
ANTISYM = "antisym"
DOUBLE = "11"
TWO_SYM = "20+02"
TWO_ANTISYM = "20-02"
OTHER = "other"

_EXCITATION = {"ground": 0, "one": 1, "11": 2, "two": 2}


@dataclass(frozen=True)
class SpectrumResult:
    """
    Lowest eigenvalues (joules, ascending) with labels and derived rates (rad/s).

    splitting is |E_antisym - E_sym| / hbar (twice |g|); signed_splitting keeps
    the sign E_antisym - E_sym. J = (E11 - E_sym - E_antisym + E_ground) / 4
    and eta = 2 (E_1 - E_0) - (E_2 - E_0) with E_1, E_2 the manifold means.
    """
    energies: np.ndarray
    labels: Tuple[str, ...]
    parities: Tuple[float, ...]
    weights: Tuple[float, ...]
    splitting: Optional[float]
    signed_splitting: Optional[float]
    J: Optional[float]
    eta: Optional[float]

    @property
    def g_magnitude(self) -> Optional[float]:
        return None if self.splitting is None else 0.5 * self.splitting

    def energy_of(self, label: str) -> Optional[float]:
        for energy, name in zip(self.energies, self.labels):
            if name == label:
                return float(energy)
        return None


@track_eigensolve("dense")
def _dense_lowest(matrix: sparse.spmatrix, k: int) -> Tuple[np.ndarray, np.ndarray]:
    return linalg.eigh(matrix.toarray(), subset_by_index=[0, k - 1])


@track_eigensolve("sparse")
def _sparse_lowest(matrix: sparse.spmatrix, k: int) -> Tuple[np.ndarray, np.ndarray]:
    diagonal = matrix.diagonal()
    row_abs = np.asarray(abs(matrix).sum(axis=1)).ravel()
    lower_bound = float(np.min(diagonal - (row_abs - np.abs(diagonal))))
    sigma = lower_bound - 1e-6 * float(np.max(np.abs(diagonal)))
    v0 = np.random.default_rng(EIGEN_SEED).standard_normal(matrix.shape[0])
    values, vectors = eigsh(matrix.tocsc(), k=k, sigma=sigma, which="LM", v0=v0, tol=EIGSH_TOL)
    order = np.argsort(values)
    return values[order], vectors[:, order]


def lowest_eigenpairs(matrix: sparse.spmatrix, k: int, solver: str = "auto") -> Tuple[np.ndarray, np.ndarray]:
    """
    The k lowest eigenpairs of a symmetric operator, ascending.

    Args:
        matrix: Symmetric sparse operator
        k: Number of eigenpairs
        solver: "auto", "dense" or "sparse"
    """
    dimension = matrix.shape[0]
    if solver == "auto":
        dense_fill = matrix.nnz > DENSE_ROW_FILL * dimension
        solver = "dense" if dimension <= DENSE_DIMENSION_LIMIT or dense_fill else "sparse"
    if solver == "dense":
        return _dense_lowest(matrix, k)
    if solver == "sparse":
        return _sparse_lowest(matrix, k)
    raise ValueError(f"unknown eigensolver: {solver!r}")


def harmonic_reference(points: np.ndarray, width: float, n_max: int = 2) -> np.ndarray:
    """
    Harmonic-oscillator functions psi_0..psi_n_max on the grid (columns).

    psi_n ~ H_n(phi / (sqrt(2) a)) exp(-phi^2 / (4 a^2)) with a = phi01, the
    ground-state spread <phi^2> = a^2; columns are normalised on the grid.
    """
    scaled = points / (math.sqrt(2.0) * width)
    envelope = np.exp(-0.5 * scaled * scaled)
    columns = []
    for n in range(n_max + 1):
        column = eval_hermite(n, scaled) * envelope
        columns.append(column / np.linalg.norm(column))
    return np.column_stack(columns)


def _exchange(state: np.ndarray, n: int) -> np.ndarray:
    """Apply (phi1, phi2) -> (-phi2, -phi1) to a row-major state vector."""
    return state.reshape(n, n)[::-1, ::-1].T.ravel()


def _classify(state: np.ndarray, ref1: np.ndarray, ref2: np.ndarray, n: int) -> Tuple[str, float]:
    amplitudes = ref1.T @ state.reshape(n, n) @ ref2
    w = amplitudes * amplitudes
    classes = {
        "ground": w[0, 0],
        "one": w[1, 0] + w[0, 1],
        "11": w[1, 1],
        "two": w[2, 0] + w[0, 2],
    }
    best = max(classes, key=classes.get)
    return best, float(classes[best])


def _resolve_pair(
    matrix: sparse.spmatrix, vectors: np.ndarray, energies: np.ndarray, idx: List[int], n: int
) -> None:
    """Diagonalize the exchange operator inside a quasi-degenerate pair (in place)."""
    basis = vectors[:, idx]
    exchanged = np.column_stack([_exchange(basis[:, j], n) for j in range(basis.shape[1])])
    projected = basis.T @ exchanged
    projected = 0.5 * (projected + projected.T)
    _, rotation = np.linalg.eigh(projected)
    rotated = basis @ rotation
    vectors[:, idx] = rotated
    energies[idx] = np.einsum("ij,ij->j", rotated, matrix @ rotated)


def lowest_spectrum(hamiltonian: CouplerHamiltonian, k: int = 6, solver: str = "auto") -> SpectrumResult:
    """
    Lowest k eigenpairs with labels, splitting, J and eta.

    Raises:
        ConfigError: k below MIN_EIGENPAIRS
        LabelAmbiguityError: ground state or the one-excitation pair could
            not be identified, or the pair parities do not separate
    """
    if k < MIN_EIGENPAIRS:
        raise ConfigError(
            f"at least {MIN_EIGENPAIRS} eigenpairs are needed to label the spectrum",
            context={"k": k},
        )
    matrix = hamiltonian.matrix
    n = hamiltonian.grid.n_points
    net = hamiltonian.net
    hbar = hamiltonian.params.hbar

    with track_phase("eigensolve", dimension=hamiltonian.dimension, k=k):
        energies, vectors = lowest_eigenpairs(matrix, k, solver=solver)
    energies = np.array(energies, dtype=float)
    vectors = np.array(vectors, dtype=float)

    points = hamiltonian.grid.points
    ref1 = harmonic_reference(points, net.phi01_1)
    ref2 = harmonic_reference(points, net.phi01_2)

    classes: List[str] = []
    weights: List[float] = []
    for j in range(k):
        cls, weight = _classify(vectors[:, j], ref1, ref2, n)
        classes.append(cls if weight >= MIN_CLASS_WEIGHT else OTHER)
        weights.append(weight)

    def parity(j: int) -> float:
        return float(vectors[:, j] @ _exchange(vectors[:, j], n))

    for manifold in ("one", "two"):
        members = [j for j, cls in enumerate(classes) if cls == manifold]
        if len(members) == 2 and min(abs(parity(j)) for j in members) < PARITY_PURITY:
            _resolve_pair(matrix, vectors, energies, members, n)

    parities = []
    for j, cls in enumerate(classes):
        p = parity(j)
        if cls in _EXCITATION:
            p *= (-1) ** _EXCITATION[cls]
        parities.append(p)

    labels = [OTHER] * k
    found: Dict[str, int] = {}
    for j, cls in enumerate(classes):
        if cls == "ground" or cls == "11":
            name = GROUND if cls == "ground" else DOUBLE
        elif cls == "one":
            name = SYM if parities[j] > 0 else ANTISYM
        elif cls == "two":
            name = TWO_SYM if parities[j] > 0 else TWO_ANTISYM
        else:
            continue
        if name in found:
            raise LabelAmbiguityError(
                f"two eigenstates classified as {name}",
                context={"states": f"{found[name]},{j}", "delta": hamiltonian.eq.delta},
            )
        found[name] = j
        labels[j] = name

    missing = [name for name in (GROUND, SYM, ANTISYM) if name not in found]
    if missing:
        raise LabelAmbiguityError(
            "required eigenstates not identified",
            context={"missing": ",".join(missing), "weights": ",".join(f"{w:.3f}" for w in weights)},
        )

    e_ground = energies[found[GROUND]]
    e_sym, e_anti = energies[found[SYM]], energies[found[ANTISYM]]
    signed = (e_anti - e_sym) / hbar

    J = None
    if DOUBLE in found:
        J = (energies[found[DOUBLE]] - e_sym - e_anti + e_ground) / (4.0 * hbar)

    eta = None
    if TWO_SYM in found and TWO_ANTISYM in found:
        e_one = 0.5 * (e_sym + e_anti)
        e_two = 0.5 * (energies[found[TWO_SYM]] + energies[found[TWO_ANTISYM]])
        eta = (2.0 * (e_one - e_ground) - (e_two - e_ground)) / hbar

    order = np.argsort(energies, kind="stable")
    result = SpectrumResult(
        energies=energies[order],
        labels=tuple(labels[j] for j in order),
        parities=tuple(parities[j] for j in order),
        weights=tuple(weights[j] for j in order),
        splitting=abs(signed),
        signed_splitting=signed,
        J=J,
        eta=eta,
    )
    logger.debug(
        "spectrum_labelled",
        labels=",".join(result.labels),
        splitting_MHz=abs(signed) / (2 * math.pi * 1e6),
    )
    return result


def solve_exact_point(
    params: CircuitParams,
    eq: EquilibriumState,
    grid: GridSpec,
    k: int = 6,
    potential: str = "nonlinear",
) -> SpectrumResult:
    """Assemble the grid Hamiltonian at this bias and return its labelled spectrum."""
    return lowest_spectrum(assemble_hamiltonian(params, eq, grid, potential=potential), k)
