"""
xmoncoupler: transverse and diagonal coupling of two Xmon qubits through a
flux-biased Josephson coupler, computed along four paths (weak coupling,
linear network, perturbative nonlinear and exact diagonalization).
"""

__version__ = "0.1.0"
