"""
Exact diagonalization of the coupled-qubit circuit on a phase grid.
"""

from xmoncoupler.exact.anharmonicity import anharmonicity_1d
from xmoncoupler.exact.hamiltonian import (
    CouplerHamiltonian,
    PotentialSurface,
    assemble_hamiltonian,
    dump_potential_csv,
    potential_surface,
)
from xmoncoupler.exact.massless import minimize_massless, minimize_massless_batch
from xmoncoupler.exact.spectrum import SpectrumResult, lowest_spectrum, solve_exact_point

__all__ = [
    "CouplerHamiltonian",
    "PotentialSurface",
    "SpectrumResult",
    "anharmonicity_1d",
    "assemble_hamiltonian",
    "dump_potential_csv",
    "lowest_spectrum",
    "minimize_massless",
    "minimize_massless_batch",
    "potential_surface",
    "solve_exact_point",
]
