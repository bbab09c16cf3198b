"""Logfire spans around the expensive phases; configure_logfire() must run first."""

import logging
import os
from contextlib import contextmanager

_log = logging.getLogger(__name__)

_logfire_enabled = bool(os.getenv("LOGFIRE_TOKEN", "").strip())

if _logfire_enabled:
    try:
        import logfire as _logfire_mod

        logfire = _logfire_mod
    except ImportError as e:
        _log.warning("logfire package not found (%s), falling back to no-op", e)
        _logfire_enabled = False

if not _logfire_enabled:

    class _NoOpLogfire:
        """Swallows every logfire call."""

        @contextmanager
        def span(self, name, **kwargs):
            yield

        def info(self, *a, **kw): pass
        def warn(self, *a, **kw): pass
        def error(self, *a, **kw): pass
        def debug(self, *a, **kw): pass

    logfire = _NoOpLogfire()  # type: ignore[assignment]


@contextmanager
def trace_solve(solver: str, beta: float):
    with logfire.span("solve_policy", solver=solver, beta=beta):
        yield


@contextmanager
def trace_replication(strategy: str, seed: int):
    """One (strategy, seed) simulation run."""
    with logfire.span("replication", strategy=strategy, seed=seed):
        yield


@contextmanager
def trace_sweep(parameter: str, value: float):
    with logfire.span("sweep_point", parameter=parameter, value=value):
        yield


@contextmanager
def trace_suite(suite: str):
    """One validation suite."""
    with logfire.span("validation_suite", suite=suite):
        yield
