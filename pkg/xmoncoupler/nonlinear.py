"""
Perturbative nonlinear corrections to the coupling.

The junction cosines beyond quadratic order add cubic and quartic terms to
the qubit potential. Written with the linear-response weights alpha, beta
(symmetric pair), the coefficients of

    U1 = (Phi0/2pi)^2 [Gamma04 (phi1^4 + phi2^4) + Gamma03 (phi1^3 - phi2^3)
                       + Gamma13 (phi1^3 phi2 + phi1 phi2^3)
                       + Gamma12 (phi1 phi2^2 - phi1^2 phi2)
                       + Gamma22 phi1^2 phi2^2]

give a first-order correction dg to the transverse coupling, the dispersive
ZZ shift J = g_tot^2 / eta and a direct ZZ term J_sub. Frequencies are in
rad/s.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from xmoncoupler.equilibrium import EquilibriumState
from xmoncoupler.errors import AsymmetricParamsError, NonPositiveAnharmonicityError
from xmoncoupler.linear import LinearNetwork
from xmoncoupler.schemas import CircuitParams

# zeta is reported as undefined when |g_linear| falls below 2pi x 1 kHz
ZETA_THRESHOLD = 2 * math.pi * 1e3


@dataclass(frozen=True)
class NonlinearCoefficients:
    """Cubic and quartic coefficients of the qubit potential (1/H)."""
    Gamma04: float
    Gamma03: float
    Gamma13: float
    Gamma12: float
    Gamma22: float
    alpha: float
    beta: float


def gamma_coefficients(params: CircuitParams, eq: EquilibriumState, net: LinearNetwork) -> NonlinearCoefficients:
    """
    Expansion coefficients of the nonlinear potential at this bias.

    Raises:
        AsymmetricParamsError: qubit inductances differ
    """
    if not params.inductances_symmetric():
        raise AsymmetricParamsError(
            "nonlinear coefficients require identical qubit inductances",
            context={"Lj1": params.Lj1, "Lj2": params.Lj2, "L01": params.L01, "L02": params.L02},
        )
    alpha, beta = net.alpha1, net.beta1
    Lj, L0, LT = params.Lj1, params.L01, params.LT
    c = 0.0 if eq.is_open else eq.cos_delta
    s = eq.sin_delta

    return NonlinearCoefficients(
        Gamma04=-1.0 / (24.0 * Lj),
        Gamma03=alpha ** 3 * s / (6.0 * LT),
        Gamma13=alpha ** 2 * c / (6.0 * LT),
        Gamma12=alpha ** 3 * s / (2.0 * LT),
        Gamma22=alpha * beta * (beta / L0 - alpha * c / LT),
        alpha=alpha,
        beta=beta,
    )


def delta_g(coeffs: NonlinearCoefficients, net: LinearNetwork) -> float:
    """
    First-order correction to g from the Gamma13 term (rad/s).

    <10|Gamma13 (phi1^3 phi2 + phi1 phi2^3)|01> = 3 Gamma13 a b (a^2 + b^2)
    with the harmonic dipole elements a = phi01_1, b = phi01_2; for a
    symmetric pair this is
    (3/2) Gamma13 (hbar omega Lq / (Phi0/2pi))^2 / hbar.
    """
    params = net.params
    a, b = net.phi01_1, net.phi01_2
    energy = params.phi0_reduced ** 2 * coeffs.Gamma13 * 3.0 * a * b * (a * a + b * b)
    return energy / params.hbar


def g_total_and_zeta(g_linear: float, dg: float, threshold: float = ZETA_THRESHOLD) -> Tuple[float, Optional[float]]:
    """
    Total coupling g + dg and the suppression ratio zeta = g_tot / g_linear.

    zeta is None (undefined) where |g_linear| < threshold.
    """
    g_tot = g_linear + dg
    if abs(g_linear) < threshold:
        return g_tot, None
    return g_tot, g_tot / g_linear


def zeta_closed_form(params: CircuitParams, omega_q: float) -> float:
    """Limit form zeta = 1 - pi^2 hbar omega_q / (Phi0^2 / (2 Lj))."""
    return 1.0 - math.pi ** 2 * params.hbar * omega_q / (params.Phi0 ** 2 / (2.0 * params.Lj1))


def delta_g_closed_form(params: CircuitParams, eq: EquilibriumState, omega_q: float, alpha: float) -> float:
    """
    Limit form of dg with Lq -> Lj (rad/s):
    cos(delta) pi^2 alpha^2 Lj / (2 LT) * (hbar omega / (Phi0^2 / 2 Lj)) * omega.
    """
    c = 0.0 if eq.is_open else eq.cos_delta
    ratio = params.hbar * omega_q / (params.Phi0 ** 2 / (2.0 * params.Lj1))
    return c * math.pi ** 2 * alpha ** 2 * params.Lj1 / (2.0 * params.LT) * ratio * omega_q


def j_dominant(g_tot: float, eta: float) -> float:
    """
    Dispersive ZZ shift J = g_tot^2 / eta (rad/s).

    Raises:
        NonPositiveAnharmonicityError: eta <= 0
    """
    if eta <= 0:
        raise NonPositiveAnharmonicityError(
            "anharmonicity must be positive",
            context={"eta": eta},
        )
    return g_tot * g_tot / eta


def j_subdominant(coeffs: NonlinearCoefficients, net: LinearNetwork) -> float:
    """
    Direct ZZ term from Gamma22 phi1^2 phi2^2 (rad/s).

    Gamma22 (Phi0/2pi)^2 phi01_1^2 phi01_2^2 / hbar.
    """
    params = net.params
    energy = coeffs.Gamma22 * params.phi0_reduced ** 2 * (net.phi01_1 * net.phi01_2) ** 2
    return energy / params.hbar


def eta_first_order(coeffs: NonlinearCoefficients, net: LinearNetwork) -> float:
    """
    Anharmonicity from the Gamma04 quartic at first order (rad/s).

    The quartic shifts level n by Gamma04 (Phi0/2pi)^2 phi01^4 (6n^2 + 6n + 3),
    so eta = (E1 - E0) - (E2 - E1) = -12 Gamma04 (Phi0/2pi)^2 phi01^4.
    """
    params = net.params
    return -12.0 * coeffs.Gamma04 * params.phi0_reduced ** 2 * net.phi01_1 ** 4 / params.hbar
