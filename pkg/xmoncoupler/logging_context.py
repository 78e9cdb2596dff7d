"""
Context management for run ID and flux point propagation.

This module provides utilities for propagating a per-invocation run_id and
the flux point currently being evaluated throughout the stack using
contextvars (thread-safe; worker threads receive a copy of the context).
"""

import math
import uuid
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator, Optional
import structlog

# Context variable for run tracking
run_id_var: ContextVar[Optional[str]] = ContextVar("run_id", default=None)


def generate_run_id() -> str:
    """
    Generate a unique run ID.

    Returns:
        UUID string for run tracking
    """
    return str(uuid.uuid4())


def set_run_id(run_id: Optional[str] = None) -> str:
    """
    Set the run ID in context.

    Args:
        run_id: Optional run ID (generates new one if not provided)

    Returns:
        The run ID that was set
    """
    if run_id is None:
        run_id = generate_run_id()

    run_id_var.set(run_id)
    bind_context(run_id=run_id)
    return run_id


def get_run_id() -> Optional[str]:
    """Get the current run ID from context, or None if not set."""
    return run_id_var.get()


@contextmanager
def flux_point_context(phi_ext: float, **extra) -> Iterator[None]:
    """
    Bind the flux point (and extra fields) to the log context for a block.

    Args:
        phi_ext: External flux in radians
        **extra: Additional key-value pairs to bind
    """
    fields = {"phi_ext_over_pi": round(phi_ext / math.pi, 9), **extra}
    bind_context(**fields)
    try:
        yield
    finally:
        unbind_context(*fields)


def clear_context():
    """
    Clear all context variables.

    Useful for cleanup after a CLI invocation or between tests.
    """
    run_id_var.set(None)
    structlog.contextvars.clear_contextvars()


def bind_context(**kwargs):
    """
    Bind additional context variables to structlog.

    Args:
        **kwargs: Key-value pairs to bind to log context
    """
    structlog.contextvars.bind_contextvars(**kwargs)


def unbind_context(*keys):
    """
    Unbind context variables from structlog.

    Args:
        *keys: Keys to unbind from log context
    """
    structlog.contextvars.unbind_contextvars(*keys)
