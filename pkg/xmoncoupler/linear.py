"""
Linear (harmonic) coupling of the two qubits.

Expanding the potential to second order around the DC equilibrium and
eliminating the massless node phases xi gives a 2x2 quadratic form in the
qubit phases phi1, phi2:

    U0 = (Phi0 / 2pi)^2 [phi1^2 / (2 Lq1) + phi2^2 / (2 Lq2) + Gamma11 phi1 phi2]

The coupler junction enters only through c = cos(delta), i.e. through the
effective inductance L_eff = LT / cos(delta), which may be negative or
infinite. All frequencies returned here are angular (rad/s).
"""

import math
from dataclasses import dataclass
from typing import Tuple

from xmoncoupler.equilibrium import EquilibriumState
from xmoncoupler.errors import AsymmetricParamsError, DegenerateNetworkError
from xmoncoupler.schemas import CircuitParams

# Relative threshold on the network determinant, in units of 1 / (Lj1 Lj2)
DEGENERATE_TOL = 1e-6


@dataclass(frozen=True)
class LinearNetwork:
    """Quadratic-order description of the coupled pair at one bias."""
    params: CircuitParams
    delta: float
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    L_sigma1: float
    L_sigma2: float
    D: float
    Lq1: float
    Lq2: float
    Gamma11: float
    omega_q1: float
    omega_q2: float
    phi01_1: float
    phi01_2: float
    M: float
    K: float

    @property
    def dipole_product(self) -> float:
        """phi01_1 * phi01_2."""
        return self.phi01_1 * self.phi01_2


def _require_symmetric(params: CircuitParams, what: str) -> None:
    if not params.inductances_symmetric():
        raise AsymmetricParamsError(
            f"{what} requires identical qubit inductances",
            context={"Lj1": params.Lj1, "Lj2": params.Lj2, "L01": params.L01, "L02": params.L02},
        )


def _mutual_and_port(params: CircuitParams, eq: EquilibriumState) -> Tuple[float, float, float]:
    """
    Mutual inductance and the two port inductances of the network.

    A current driven into qubit 1 splits at node 1 between L01 and the branch
    L_eff + L02; the series form below stays finite when L_eff is infinite.
    """
    c = eq.cos_delta
    if eq.is_open:
        return 0.0, params.Lj1 + params.L01, params.Lj2 + params.L02
    denominator = params.LT + (params.L01 + params.L02) * c
    if denominator == 0.0:
        raise DegenerateNetworkError(
            "L_eff cancels the grounding inductances",
            context={"delta": eq.delta, "L_eff": eq.L_eff},
        )
    M = params.L01 * params.L02 * c / denominator
    Lq1 = params.Lj1 + params.L01 - params.L01 * params.L01 * c / denominator
    Lq2 = params.Lj2 + params.L02 - params.L02 * params.L02 * c / denominator
    return M, Lq1, Lq2


def network_impedances(params: CircuitParams, eq: EquilibriumState) -> Tuple[float, float]:
    """
    Mutual inductance M and qubit inductance Lq = Lj + L0 - M (symmetric pair).

    M = L0^2 / (L_eff + 2 L0); M = 0 when the coupler is open.

    Raises:
        AsymmetricParamsError: qubit inductances differ
    """
    _require_symmetric(params, "network_impedances")
    M, Lq, _ = _mutual_and_port(params, eq)
    return M, Lq


def weak_coupling_g(params: CircuitParams, eq: EquilibriumState, omega_q: float) -> float:
    """
    Closed-form weak-coupling g (rad/s) for a symmetric resonant pair.

    g = -L0^2 cos(delta) omega_q / (2 (Lj + L0) (LT + 2 L0 cos(delta)))
    """
    _require_symmetric(params, "weak_coupling_g")
    c = 0.0 if eq.is_open else eq.cos_delta
    L0, Lj = params.L01, params.Lj1
    return -L0 * L0 * c * omega_q / (2.0 * (Lj + L0) * (params.LT + 2.0 * L0 * c))


def gamma11_weak(params: CircuitParams, eq: EquilibriumState) -> float:
    """Weak-coupling estimate of Gamma11 (1/H): -L0^2 / ((Lj + L0)^2 (L_eff + 2 L0))."""
    _require_symmetric(params, "gamma11_weak")
    c = 0.0 if eq.is_open else eq.cos_delta
    L0, Lj = params.L01, params.Lj1
    return -L0 * L0 * c / ((Lj + L0) ** 2 * (params.LT + 2.0 * L0 * c))


def uncoupled_omega_q(params: CircuitParams) -> Tuple[float, float]:
    """Frequencies 1 / sqrt((Lj + L0) C) of the two qubits with the coupler removed."""
    return (
        1.0 / math.sqrt((params.Lj1 + params.L01) * params.C1),
        1.0 / math.sqrt((params.Lj2 + params.L02) * params.C2),
    )


def linear_network(params: CircuitParams, eq: EquilibriumState) -> LinearNetwork:
    """
    Eliminate the massless nodes at quadratic order.

    The massless phases follow the qubit phases linearly,
    xi1 = alpha1 phi1 + beta2 phi2 and xi2 = beta1 phi1 + alpha2 phi2.

    Raises:
        DegenerateNetworkError: |D| below DEGENERATE_TOL / (Lj1 Lj2)
    """
    c = 0.0 if eq.is_open else eq.cos_delta
    Lj1, Lj2, L01, L02, LT = params.Lj1, params.Lj2, params.L01, params.L02, params.LT

    inv_L_sigma1 = 1.0 / Lj1 + 1.0 / L01 + c / LT
    inv_L_sigma2 = 1.0 / Lj2 + 1.0 / L02 + c / LT
    D = inv_L_sigma1 * inv_L_sigma2 - (c / LT) ** 2
    if abs(D) < DEGENERATE_TOL / (Lj1 * Lj2):
        raise DegenerateNetworkError(
            "linear network determinant vanished",
            context={"delta": eq.delta, "D": D},
        )

    alpha1 = inv_L_sigma2 / (Lj1 * D)
    alpha2 = inv_L_sigma1 / (Lj2 * D)
    beta1 = c / (Lj1 * LT * D)
    beta2 = c / (Lj2 * LT * D)

    inv_Lq1 = ((1 - alpha1) ** 2 / Lj1 + alpha1 ** 2 / L01 + beta1 ** 2 / Lj2
               + beta1 ** 2 / L02 + c * (alpha1 - beta1) ** 2 / LT)
    inv_Lq2 = ((1 - alpha2) ** 2 / Lj2 + alpha2 ** 2 / L02 + beta2 ** 2 / Lj1
               + beta2 ** 2 / L01 + c * (alpha2 - beta2) ** 2 / LT)
    Gamma11 = (alpha1 * beta2 / L01 + (alpha1 - 1) * beta2 / Lj1
               + alpha2 * beta1 / L02 + (alpha2 - 1) * beta1 / Lj2
               - c * (alpha1 - beta1) * (alpha2 - beta2) / LT)

    Lq1, Lq2 = 1.0 / inv_Lq1, 1.0 / inv_Lq2
    omega_q1 = 1.0 / math.sqrt(Lq1 * params.C1)
    omega_q2 = 1.0 / math.sqrt(Lq2 * params.C2)
    phi01_1 = math.sqrt(params.hbar * Lq1 * omega_q1 / 2.0) / params.phi0_reduced
    phi01_2 = math.sqrt(params.hbar * Lq2 * omega_q2 / 2.0) / params.phi0_reduced

    M, port1, port2 = _mutual_and_port(params, eq)
    K = 1.0 - M * M / (port1 * port2)

    return LinearNetwork(
        params=params,
        delta=eq.delta,
        alpha1=alpha1,
        alpha2=alpha2,
        beta1=beta1,
        beta2=beta2,
        L_sigma1=1.0 / inv_L_sigma1,
        L_sigma2=1.0 / inv_L_sigma2,
        D=D,
        Lq1=Lq1,
        Lq2=Lq2,
        Gamma11=Gamma11,
        omega_q1=omega_q1,
        omega_q2=omega_q2,
        phi01_1=phi01_1,
        phi01_2=phi01_2,
        M=M,
        K=K,
    )


def transverse_g_linear(net: LinearNetwork) -> float:
    """g = Gamma11 sqrt(Lq1 Lq2) sqrt(omega_q1 omega_q2) / 2, in rad/s."""
    return net.Gamma11 * math.sqrt(net.Lq1 * net.Lq2) * math.sqrt(net.omega_q1 * net.omega_q2) / 2.0
