"""
Phase instrumentation for structured logging.

This module provides utilities for tracking:
- Computation phase latency (equilibrium, minimization, eigensolve, sweep)
- Solver effort summaries
"""

import time
from contextlib import contextmanager
from xmoncoupler.logging_config import get_logger
from xmoncoupler.metrics import phase_duration_seconds

logger = get_logger(__name__)


def log_phase(
    phase: str,
    status: str,
    **extra_context
):
    """
    Log major computation phase events.

    Args:
        phase: Phase name (e.g., "massless_minimization", "eigensolve", "sweep")
        status: Phase status ("started", "completed", "failed")
        **extra_context: Additional context to log
    """
    if status == "failed":
        log_level = logger.error
    elif status == "started":
        log_level = logger.debug
    else:
        log_level = logger.info

    log_level(
        "pipeline_phase",
        phase=phase,
        status=status,
        **extra_context
    )


@contextmanager
def track_phase(phase: str, **extra_context):
    """
    Context manager to track a computation phase.

    Args:
        phase: Phase name
        **extra_context: Additional context to log

    Yields:
        None

    Example:
        with track_phase("eigensolve", n_points=61):
            spectrum = lowest_spectrum(hamiltonian, 6)
    """
    start_time = time.time()

    log_phase(phase, "started", **extra_context)

    error = None
    try:
        yield
    except Exception as e:
        error = e
        raise
    finally:
        duration = time.time() - start_time
        status = "failed" if error else "completed"
        phase_duration_seconds.labels(phase=phase).observe(duration)

        log_phase(
            phase,
            status,
            duration_ms=round(duration * 1000, 2),
            error=str(error) if error else None,
            **extra_context
        )


def log_solver_summary(solver: str, **fields):
    """
    Log a summary of an iterative solve (iterations, residual, grid size).

    Args:
        solver: Solver name
        **fields: Summary values
    """
    logger.debug("solver_summary", solver=solver, **fields)
