"""
Prometheus metrics for xmoncoupler runs.

This module provides metrics collection for monitoring sweep progress,
per-path failures, solver effort and eigensolver cost. A batch run writes the
registry to a text file (node-exporter textfile format) at the end.
"""

from functools import wraps
import time

from prometheus_client import Counter, Histogram, Gauge, REGISTRY, write_to_textfile

from xmoncoupler.errors import OutputError


# Flux point metrics
flux_points_total = Counter(
    'xmoncoupler_flux_points_total',
    'Total number of flux points evaluated',
    ['path', 'status']  # path: weak, linear, perturbative, exact; status: success, error
)

# Phase metrics
phase_duration_seconds = Histogram(
    'xmoncoupler_phase_duration_seconds',
    'Duration of a computation phase in seconds',
    ['phase']
)

# Solver metrics
newton_iterations = Histogram(
    'xmoncoupler_newton_iterations',
    'Damped Newton iterations needed by the massless minimization',
    buckets=(1, 2, 3, 4, 5, 6, 8, 10, 15, 20, 30, 50)
)

eigensolve_duration_seconds = Histogram(
    'xmoncoupler_eigensolve_duration_seconds',
    'Eigensolver wall time in seconds',
    ['solver']  # sparse, dense, tridiagonal
)

# Sweep progress
sweep_points_remaining = Gauge(
    'xmoncoupler_sweep_points_remaining',
    'Flux points not yet finished in the running sweep'
)


def track_flux_point(path, success=True):
    """
    Record one evaluated flux point.

    Args:
        path: Computation path name
        success: True if the path produced its values
    """
    status = 'success' if success else 'error'
    flux_points_total.labels(path=path, status=status).inc()


def track_newton_iterations(count):
    """Record the iteration count of one batch minimization."""
    newton_iterations.observe(count)


def track_eigensolve(solver):
    """
    Decorator recording eigensolver wall time.

    Usage:
        @track_eigensolve('dense')
        def _dense_lowest(matrix, k):
            ...
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.time()
            try:
                return func(*args, **kwargs)
            finally:
                eigensolve_duration_seconds.labels(solver=solver).observe(time.time() - start_time)
        return wrapper
    return decorator


def update_sweep_progress(remaining):
    """Set the number of flux points still pending."""
    sweep_points_remaining.set(remaining)


def write_metrics(path):
    """
    Write the default registry to a text file.

    Args:
        path: Destination file path

    Raises:
        OutputError: the file cannot be written
    """
    try:
        write_to_textfile(str(path), REGISTRY)
    except OSError as e:
        raise OutputError(
            f"cannot write {path}: {e.strerror or e}", context={"path": str(path)}, original_error=e
        ) from e


def mark_point_finished():
    """Count down one finished flux point."""
    sweep_points_remaining.dec()
