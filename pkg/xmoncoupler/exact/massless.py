"""
Minimization over the massless node phases.

The nodes between each qubit junction and its grounding inductor carry no
capacitance, so for every pair of qubit phases (phi1, phi2) the node phases
xi1, xi2 sit at the minimum of the potential. Deviations are measured from
the DC equilibrium, and the equilibrium current condition
x = -sin(delta) / LT is used to remove the linear terms analytically:

    u = sum_i [xi_i^2 / (2 L0i) + 2 sin^2((phi_i - xi_i) / 2) / Lji]
        + [2 sin^2(d / 2) cos(delta) + (d - sin d) sin(delta)] / LT,

with d = xi1 - xi2 and U = (Phi0 / 2pi)^2 u. u vanishes at the origin.

All grid points are minimized together by a vectorized damped Newton
iteration with backtracking, seeded by the linear-response solution.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from xmoncoupler.equilibrium import EquilibriumState
from xmoncoupler.errors import NonConvergenceError, SaddlePointError
from xmoncoupler.linear import LinearNetwork, linear_network
from xmoncoupler.logging_metrics import log_solver_summary
from xmoncoupler.metrics import track_newton_iterations
from xmoncoupler.schemas import CircuitParams

# gradient tolerance relative to the natural scale 1 / L0
GRAD_TOL = 1e-12
MAX_ITER = 60
MAX_HALVINGS = 40


@dataclass(frozen=True)
class MasslessSolution:
    """Minimizers and minimum values of the reduced potential u (1/H)."""
    xi1: np.ndarray
    xi2: np.ndarray
    u: np.ndarray
    iterations: int


def _coupler_trig(eq: EquilibriumState) -> Tuple[float, float]:
    c = 0.0 if eq.is_open else eq.cos_delta
    return c, eq.sin_delta


def reduced_potential(params: CircuitParams, eq: EquilibriumState, phi1, phi2, xi1, xi2) -> np.ndarray:
    """Potential deviation u = U / (Phi0/2pi)^2 in 1/H; zero at the origin."""
    c, s = _coupler_trig(eq)
    d = xi1 - xi2
    h1 = np.sin(0.5 * (phi1 - xi1))
    h2 = np.sin(0.5 * (phi2 - xi2))
    hd = np.sin(0.5 * d)
    qubit1 = xi1 * xi1 / (2.0 * params.L01) + 2.0 * h1 * h1 / params.Lj1
    qubit2 = xi2 * xi2 / (2.0 * params.L02) + 2.0 * h2 * h2 / params.Lj2
    coupler = (2.0 * hd * hd * c + (d - np.sin(d)) * s) / params.LT
    return (qubit1 + qubit2) + coupler


def _derivatives(params: CircuitParams, c: float, s: float, phi1, phi2, xi1, xi2):
    d = xi1 - xi2
    sin_d, cos_d = np.sin(d), np.cos(d)
    hd = np.sin(0.5 * d)
    coupler_grad = (sin_d * c + 2.0 * hd * hd * s) / params.LT
    coupler_curv = (cos_d * c + sin_d * s) / params.LT

    g1 = (xi1 / params.L01 - np.sin(phi1 - xi1) / params.Lj1) + coupler_grad
    g2 = (xi2 / params.L02 - np.sin(phi2 - xi2) / params.Lj2) - coupler_grad
    h11 = (1.0 / params.L01 + np.cos(phi1 - xi1) / params.Lj1) + coupler_curv
    h22 = (1.0 / params.L02 + np.cos(phi2 - xi2) / params.Lj2) + coupler_curv
    h12 = -coupler_curv
    return g1, g2, h11, h22, h12


def linear_response_seed(net: LinearNetwork, phi1, phi2) -> Tuple[np.ndarray, np.ndarray]:
    """xi1 = alpha1 phi1 + beta2 phi2, xi2 = beta1 phi1 + alpha2 phi2."""
    phi1 = np.asarray(phi1, dtype=float)
    phi2 = np.asarray(phi2, dtype=float)
    return net.alpha1 * phi1 + net.beta2 * phi2, net.beta1 * phi1 + net.alpha2 * phi2


def minimize_massless_batch(
    params: CircuitParams,
    eq: EquilibriumState,
    phi1,
    phi2,
    seed: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    net: Optional[LinearNetwork] = None,
) -> MasslessSolution:
    """
    Minimize u over (xi1, xi2) at every (phi1, phi2) of the input arrays.

    Raises:
        NonConvergenceError: gradient tolerance not met within MAX_ITER
        SaddlePointError: converged point with a non positive-definite Hessian
    """
    phi1, phi2 = np.broadcast_arrays(np.asarray(phi1, dtype=float), np.asarray(phi2, dtype=float))
    if seed is None:
        if net is None:
            net = linear_network(params, eq)
        seed = linear_response_seed(net, phi1, phi2)
    xi1 = np.array(np.broadcast_to(seed[0], phi1.shape), dtype=float)
    xi2 = np.array(np.broadcast_to(seed[1], phi1.shape), dtype=float)

    c, s = _coupler_trig(eq)
    scale = 1.0 / min(params.L01, params.L02)
    grad_tol = GRAD_TOL * scale
    u = reduced_potential(params, eq, phi1, phi2, xi1, xi2)

    iterations = 0
    while True:
        g1, g2, h11, h22, h12 = _derivatives(params, c, s, phi1, phi2, xi1, xi2)
        grad_norm = np.hypot(g1, g2)
        if grad_norm.size == 0 or float(grad_norm.max()) < grad_tol:
            break
        if iterations >= MAX_ITER:
            worst = int(np.argmax(grad_norm))
            raise NonConvergenceError(
                "massless minimization did not converge",
                context={
                    "phi1": float(phi1.flat[worst]),
                    "phi2": float(phi2.flat[worst]),
                    "gradient": float(grad_norm.flat[worst] / scale),
                    "iterations": iterations,
                },
            )
        iterations += 1

        det = h11 * h22 - h12 * h12
        newton = (det > 0) & (h11 > 0)
        safe_det = np.where(newton, det, 1.0)
        step1 = np.where(newton, -(h22 * g1 - h12 * g2) / safe_det, -g1 / scale)
        step2 = np.where(newton, -(h11 * g2 - h12 * g1) / safe_det, -g2 / scale)

        slack = 1e-12 * (np.abs(u) + 1.0 / max(params.Lj1, params.Lj2))
        t = np.ones_like(u)
        for _ in range(MAX_HALVINGS):
            trial1 = xi1 + t * step1
            trial2 = xi2 + t * step2
            u_trial = reduced_potential(params, eq, phi1, phi2, trial1, trial2)
            rejected = u_trial > u + slack
            if not rejected.any():
                break
            t = np.where(rejected, 0.5 * t, t)
        xi1, xi2, u = trial1, trial2, u_trial

    g1, g2, h11, h22, h12 = _derivatives(params, c, s, phi1, phi2, xi1, xi2)
    saddle = ~((h11 * h22 - h12 * h12 > 0) & (h11 > 0))
    if saddle.any():
        where = int(np.argmax(saddle))
        raise SaddlePointError(
            "massless stationary point is not a minimum",
            context={"phi1": float(phi1.flat[where]), "phi2": float(phi2.flat[where])},
        )

    track_newton_iterations(iterations)
    log_solver_summary("massless_newton", iterations=iterations, points=int(u.size))
    return MasslessSolution(xi1=xi1, xi2=xi2, u=u, iterations=iterations)


def minimize_massless(
    params: CircuitParams,
    eq: EquilibriumState,
    phi1: float,
    phi2: float,
    seed: Optional[Tuple[float, float]] = None,
) -> Tuple[float, float]:
    """Minimizer (xi1*, xi2*) at a single point of the qubit phases."""
    seed_arrays = None
    if seed is not None:
        seed_arrays = (np.array([seed[0]], dtype=float), np.array([seed[1]], dtype=float))
    solution = minimize_massless_batch(
        params, eq, np.array([phi1], dtype=float), np.array([phi2], dtype=float), seed=seed_arrays
    )
    return float(solution.xi1[0]), float(solution.xi2[0])
