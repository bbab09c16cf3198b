"""
Logfire setup. Call configure_logfire() once at process start (main.py does);
without LOGFIRE_TOKEN it does nothing and runs stay fully offline.
"""

import logging
import os
from functools import lru_cache

_log = logging.getLogger(__name__)


@lru_cache(maxsize=1)
def configure_logfire(service_name: str = "ncformation") -> bool:
    """
    Configure Logfire and instrument pydantic config validation.

    Idempotent within a process. Returns True when Logfire is active.
    """
    token = os.getenv("LOGFIRE_TOKEN", "").strip()
    if not token:
        _log.debug("LOGFIRE_TOKEN not set, Logfire disabled")
        return False

    try:
        import logfire

        logfire.configure(
            token=token,
            service_name=service_name,
            environment=os.getenv("ENV", "local"),
            console=os.getenv("LOGFIRE_CONSOLE", "false").lower() == "true",
            send_to_logfire=True,
        )
        try:
            logfire.instrument_pydantic(record="failure")
        except Exception as exc:
            _log.debug("Logfire: pydantic instrumentation skipped (%s)", exc)

        _log.info("Logfire configured for service '%s'", service_name)
        return True
    except Exception as exc:
        _log.warning("Logfire setup failed (%s), continuing without it", exc)
        return False
