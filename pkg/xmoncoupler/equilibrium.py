"""
DC equilibrium of the coupler loop.

The loop formed by the two grounding inductors and the coupler junction
carries a circulating current set by the external flux. With
y = xi_bar2 - xi_bar1 the stationary condition reduces to the scalar
equation

    y + r * sin(y + phi_ext) = 0,    r = (L01 + L02) / LT,

which has a unique root in [-r, r] while r < 1. All phases are in radians;
x is the loop current in units of Phi0 / 2pi (amperes times 2pi / Phi0).
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import optimize

from xmoncoupler.errors import InvalidRegimeError, NonConvergenceError
from xmoncoupler.logging_config import get_logger
from xmoncoupler.schemas import CircuitParams

logger = get_logger(__name__)

# |cos delta| below this counts as an open coupler (infinite L_eff)
OPEN_COUPLER_TOL = 1e-12
_Y_XTOL = 1e-16
_Y_RTOL = 8 * np.finfo(float).eps
_MAX_ITER = 100


@dataclass(frozen=True)
class EquilibriumState:
    """Classical operating point of the coupler at one external flux."""
    phi_ext: float
    y: float
    delta: float
    xi_bar1: float
    xi_bar2: float
    x: float
    L_eff: float

    @property
    def cos_delta(self) -> float:
        return math.cos(self.delta)

    @property
    def sin_delta(self) -> float:
        return math.sin(self.delta)

    @property
    def delta_mod_2pi(self) -> float:
        return self.delta % (2 * math.pi)

    @property
    def is_open(self) -> bool:
        """True at a coupling zero, where the coupler carries no linear current."""
        return abs(self.cos_delta) < OPEN_COUPLER_TOL

    @property
    def delta_identity_error(self) -> float:
        """Error of the delta ~ phi_ext approximation (equals y)."""
        return self.delta - self.phi_ext


def _check_regime(params: CircuitParams) -> float:
    r = params.screening_ratio
    if r >= 1.0:
        raise InvalidRegimeError(
            "screening ratio r = (L01 + L02) / LT must be below 1",
            context={"r": r},
        )
    return r


def solve_y_exact(params: CircuitParams, phi_ext: float) -> float:
    """
    Solve y + r sin(y + phi_ext) = 0 to |residual| < 1e-14.

    The left-hand side is strictly increasing and changes sign on [-r, r],
    so Brent's method on that bracket always finds the root.

    Raises:
        InvalidRegimeError: r >= 1
        NonConvergenceError: iteration cap reached
    """
    r = _check_regime(params)

    def loop_residual(y: float) -> float:
        return y + r * math.sin(y + phi_ext)

    if r == 0.0 or loop_residual(0.0) == 0.0:
        return 0.0

    y, result = optimize.brentq(
        loop_residual, -r, r,
        xtol=_Y_XTOL, rtol=_Y_RTOL, maxiter=_MAX_ITER,
        full_output=True, disp=False,
    )
    if not result.converged:
        raise NonConvergenceError(
            "loop equation did not converge",
            context={"phi_ext": phi_ext, "r": r, "iterations": result.iterations, "flag": result.flag},
        )
    return y


def solve_y_perturbative(params: CircuitParams, phi_ext: float) -> float:
    """Second-order expansion y = -r sin(phi) + (r^2 / 2) sin(2 phi)."""
    r = _check_regime(params)
    return -r * math.sin(phi_ext) + 0.5 * r * r * math.sin(2 * phi_ext)


def _state_from_y(params: CircuitParams, phi_ext: float, y: float) -> EquilibriumState:
    delta = phi_ext + y
    x = y / (params.L01 + params.L02)
    cos_delta = math.cos(delta)
    L_eff = math.inf if abs(cos_delta) < OPEN_COUPLER_TOL else params.LT / cos_delta
    return EquilibriumState(
        phi_ext=phi_ext,
        y=y,
        delta=delta,
        xi_bar1=-params.L01 * x,
        xi_bar2=params.L02 * x,
        x=x,
        L_eff=L_eff,
    )


def equilibrium(params: CircuitParams, phi_ext: float) -> EquilibriumState:
    """
    Exact equilibrium at external flux phi_ext (radians).

    Raises:
        InvalidRegimeError: r >= 1
        NonConvergenceError: root finder failed
    """
    state = _state_from_y(params, phi_ext, solve_y_exact(params, phi_ext))
    logger.debug(
        "equilibrium_solved",
        phi_ext=phi_ext,
        delta=state.delta,
        L_eff=state.L_eff,
    )
    return state


def equilibrium_perturbative(params: CircuitParams, phi_ext: float) -> EquilibriumState:
    """Equilibrium from the second-order closed form of y."""
    return _state_from_y(params, phi_ext, solve_y_perturbative(params, phi_ext))


def coupling_zero_fluxes(params: CircuitParams) -> Tuple[float, float]:
    """
    External fluxes in [0, 2pi) where cos(delta) = 0.

    delta + r sin(delta) = phi_ext evaluated at delta = pi/2 and 3pi/2.
    """
    r = _check_regime(params)
    return (0.5 * math.pi + r, 1.5 * math.pi - r)


def uncoupled_equilibrium(params: CircuitParams, mode: str = "zero_coupling") -> Tuple[CircuitParams, EquilibriumState]:
    """
    Operating point with the coupler linearly switched off.

    Args:
        params: Circuit parameters
        mode: "zero_coupling" biases at the first coupling zero,
            "open" replaces LT by 1e6 H and biases at zero flux

    Returns:
        (parameters actually used, equilibrium)
    """
    if mode == "zero_coupling":
        return params, equilibrium(params, coupling_zero_fluxes(params)[0])
    if mode == "open":
        opened = params.with_updates(LT=1e6)
        return opened, equilibrium(opened, 0.0)
    raise ValueError(f"unknown uncoupled mode: {mode!r}")
