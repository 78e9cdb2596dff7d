"""
Flux sweeps across the four coupling paths.

Every flux point is independent: the equilibrium, the linear network, the
perturbative corrections and the exact spectrum are recomputed from the
circuit parameters, so points are evaluated on a thread pool and collected
in input order. A failing path records its diagnostic in the row's error
column and leaves its columns empty; the other paths still report.
"""

import math
import os
import contextvars
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Callable, Dict, List, Optional, Sequence

from xmoncoupler.equilibrium import equilibrium, uncoupled_equilibrium
from xmoncoupler.errors import CouplerError
from xmoncoupler.exact.anharmonicity import anharmonicity_1d
from xmoncoupler.exact.hamiltonian import assemble_hamiltonian
from xmoncoupler.exact.spectrum import lowest_spectrum, solve_exact_point
from xmoncoupler.linear import linear_network, transverse_g_linear, weak_coupling_g
from xmoncoupler.logging_config import get_logger
from xmoncoupler.logging_context import flux_point_context, get_run_id
from xmoncoupler.logging_metrics import track_phase
from xmoncoupler.metrics import mark_point_finished, track_flux_point, update_sweep_progress
from xmoncoupler.nonlinear import (
    delta_g,
    g_total_and_zeta,
    gamma_coefficients,
    j_dominant,
    j_subdominant,
)
from xmoncoupler.schemas import CircuitParams, GridSpec, SweepConfig, SweepRow

logger = get_logger(__name__)

MAX_WORKERS_ENV = "XMONCOUPLER_MAX_WORKERS"

_MHZ = 2 * math.pi * 1e6
_KHZ = 2 * math.pi * 1e3
_HZ = 2 * math.pi


def resolve_workers(requested: Optional[int] = None) -> int:
    """
    Worker count: the request (or all cores), capped by XMONCOUPLER_MAX_WORKERS.
    """
    workers = requested if requested is not None else (os.cpu_count() or 1)
    cap = os.getenv(MAX_WORKERS_ENV)
    if cap:
        workers = min(workers, max(1, int(cap)))
    return max(1, workers)


def parallel_map(func: Callable[..., Any], args_list: Sequence[tuple], n_jobs: int = 1) -> List[Any]:
    """
    Execute func(*args) for each args in args_list, optionally on threads.

    Results come back in input order. Each task runs in its own copy of the
    caller's context so the run ID and other bound log fields follow it.
    """
    if n_jobs == 1 or len(args_list) <= 1:
        return [func(*args) for args in args_list]

    results: List[Any] = [None] * len(args_list)
    contexts = [contextvars.copy_context() for _ in args_list]

    with ThreadPoolExecutor(max_workers=n_jobs) as executor:
        future_to_idx = {
            executor.submit(ctx.run, func, *args): i
            for i, (ctx, args) in enumerate(zip(contexts, args_list))
        }
        for future in as_completed(future_to_idx):
            idx = future_to_idx[future]
            results[idx] = future.result()
    return results


def resolve_eta(config: SweepConfig, params: Optional[CircuitParams] = None) -> Optional[float]:
    """
    Anharmonicity (rad/s) used by the dispersive J estimate.

    The configured override wins; otherwise the 1D exact value at the
    configured uncoupled bias, computed only when the perturbative path runs.
    """
    if config.eta_override is not None:
        return config.eta_override
    if "perturbative" not in config.paths:
        return None
    params = params or config.circuit_params
    used, eq = uncoupled_equilibrium(params, config.eta_bias)
    eta = anharmonicity_1d(used, eq, config.eta_grid)
    logger.info("anharmonicity_resolved", eta_MHz=eta / _MHZ, bias=config.eta_bias)
    return eta


def compute_point(config: SweepConfig, params: CircuitParams, phi_ext: float, eta: Optional[float]) -> SweepRow:
    """Evaluate every enabled path at one external flux."""
    row: Dict[str, Any] = {"phi_ext_over_pi": phi_ext / math.pi}
    errors: List[str] = []
    paths = config.paths

    with flux_point_context(phi_ext):
        try:
            eq = equilibrium(params, phi_ext)
        except CouplerError as e:
            logger.error("equilibrium_failed", error=e.describe())
            for path in paths:
                track_flux_point(path, success=False)
            return SweepRow(phi_ext_over_pi=row["phi_ext_over_pi"], error=f"equilibrium: {e.describe()}")

        row["delta_rad"] = eq.delta
        row["L_eff_nH"] = None if math.isinf(eq.L_eff) else eq.L_eff * 1e9

        if "weak" in paths:
            try:
                row["g_weak_MHz"] = weak_coupling_g(params, eq, config.omega_q_weak) / _MHZ
                track_flux_point("weak")
            except CouplerError as e:
                errors.append(f"weak: {e.describe()}")
                track_flux_point("weak", success=False)

        net = None
        if "linear" in paths or "perturbative" in paths:
            try:
                net = linear_network(params, eq)
                g_linear = transverse_g_linear(net)
                if "linear" in paths:
                    row["omega_q_GHz"] = net.omega_q1 / (2 * math.pi * 1e9)
                    row["g_linear_MHz"] = g_linear / _MHZ
                    track_flux_point("linear")
            except CouplerError as e:
                errors.append(f"linear: {e.describe()}")
                if "linear" in paths:
                    track_flux_point("linear", success=False)

        if "perturbative" in paths and net is None:
            errors.append("perturbative: linear network unavailable")
            track_flux_point("perturbative", success=False)
        elif "perturbative" in paths:
            try:
                coeffs = gamma_coefficients(params, eq, net)
                dg = delta_g(coeffs, net)
                g_tot, zeta = g_total_and_zeta(g_linear, dg)
                row["dg_MHz"] = dg / _MHZ
                row["g_tot_MHz"] = g_tot / _MHZ
                row["zeta"] = "undefined" if zeta is None else zeta
                row["J_sub_Hz"] = j_subdominant(coeffs, net) / _HZ
                if eta is not None:
                    row["J_approx_kHz"] = j_dominant(g_tot, eta) / _KHZ
                    row["eta_MHz"] = eta / _MHZ
                track_flux_point("perturbative")
            except CouplerError as e:
                errors.append(f"perturbative: {e.describe()}")
                track_flux_point("perturbative", success=False)

        if "exact" in paths:
            try:
                spectrum = solve_exact_point(params, eq, config.grid, config.n_eigen)
                row["splitting_ED_MHz"] = spectrum.splitting / _MHZ
                if spectrum.J is not None:
                    row["J_ED_kHz"] = spectrum.J / _KHZ
                track_flux_point("exact")
            except CouplerError as e:
                errors.append(f"exact: {e.describe()}")
                track_flux_point("exact", success=False)

        if errors:
            row["error"] = "; ".join(errors)
            logger.warning("flux_point_incomplete", error=row["error"])

    return SweepRow(**row)


def run_sweep(config: SweepConfig, workers: Optional[int] = None) -> List[SweepRow]:
    """
    Evaluate the configured flux grid; rows come back in flux order.

    Raises:
        CouplerError: failures that affect every point (invalid regime,
            anharmonicity of the uncoupled qubit)
    """
    params = config.circuit_params
    fluxes = [float(phi) for phi in config.flux_values]
    n_jobs = resolve_workers(workers if workers is not None else config.workers)

    with track_phase("sweep", n_flux=len(fluxes), paths=",".join(config.paths), workers=n_jobs):
        # screening regime is checked once up front; an invalid circuit fails the run
        equilibrium(params, fluxes[0])
        eta = resolve_eta(config, params)
        update_sweep_progress(len(fluxes))

        def task(phi_ext: float) -> SweepRow:
            row = compute_point(config, params, phi_ext, eta)
            mark_point_finished()
            return row

        rows = parallel_map(task, [(phi,) for phi in fluxes], n_jobs=n_jobs)
        update_sweep_progress(0)

    failed = sum(1 for row in rows if row.error)
    logger.info("sweep_finished", points=len(rows), failed_points=failed)
    return rows


def point_report(config: SweepConfig, phi_ext: float) -> Dict[str, Any]:
    """All quantities at one flux, with intermediate diagnostics, as plain data."""
    params = config.circuit_params
    eta = resolve_eta(config, params)
    row = compute_point(config, params, phi_ext, eta)
    report: Dict[str, Any] = {"run_id": get_run_id(), "row": row.model_dump(), "diagnostics": {}}
    diagnostics = report["diagnostics"]

    eq = equilibrium(params, phi_ext)
    diagnostics["equilibrium"] = {
        "phi_ext": eq.phi_ext, "y": eq.y, "delta": eq.delta,
        "xi_bar1": eq.xi_bar1, "xi_bar2": eq.xi_bar2, "x": eq.x,
        "L_eff": None if math.isinf(eq.L_eff) else eq.L_eff,
    }
    try:
        net = linear_network(params, eq)
        diagnostics["network"] = {
            "alpha1": net.alpha1, "alpha2": net.alpha2, "beta1": net.beta1, "beta2": net.beta2,
            "Lq1": net.Lq1, "Lq2": net.Lq2, "Gamma11": net.Gamma11, "M": net.M, "K": net.K,
            "phi01_1": net.phi01_1, "phi01_2": net.phi01_2,
        }
        coeffs = gamma_coefficients(params, eq, net)
        diagnostics["coefficients"] = {
            "Gamma04": coeffs.Gamma04, "Gamma03": coeffs.Gamma03, "Gamma13": coeffs.Gamma13,
            "Gamma12": coeffs.Gamma12, "Gamma22": coeffs.Gamma22,
        }
    except CouplerError as e:
        diagnostics["network_error"] = e.describe()
    return report


def convergence_report(config: SweepConfig, fluxes: Sequence[float], sizes: Sequence[int]) -> List[Dict[str, Any]]:
    """
    Exact splitting and J at each flux for increasing grid sizes.

    Each entry carries the relative change against the previous size.
    """
    params = config.circuit_params
    entries: List[Dict[str, Any]] = []
    for phi_ext in fluxes:
        eq = equilibrium(params, phi_ext)
        previous: Optional[Dict[str, Any]] = None
        for size in sizes:
            grid = GridSpec(n_points=size, span=config.grid.span, kinetic=config.grid.kinetic)
            with flux_point_context(phi_ext, n_points=size):
                spectrum = lowest_spectrum(assemble_hamiltonian(params, eq, grid), config.n_eigen)
            entry = {
                "phi_ext_over_pi": phi_ext / math.pi,
                "n_points": size,
                "splitting_MHz": spectrum.splitting / _MHZ,
                "J_kHz": None if spectrum.J is None else spectrum.J / _KHZ,
                "splitting_rel_change": None,
                "J_rel_change": None,
            }
            if previous is not None:
                entry["splitting_rel_change"] = _relative_change(previous["splitting_MHz"], entry["splitting_MHz"])
                entry["J_rel_change"] = _relative_change(previous["J_kHz"], entry["J_kHz"])
            entries.append(entry)
            previous = entry
    return entries


def _relative_change(old: Optional[float], new: Optional[float]) -> Optional[float]:
    if old is None or new is None or new == 0.0:
        return None
    return abs(new - old) / abs(new)
