from .paths import CONFIG_STORAGE_DIR, LOG_DIR, PROJECT_ROOT, RESULTS_DIR, STORAGE_DIR
from .logger import configure_logging, get_logger, timed

__all__ = [
    "PROJECT_ROOT",
    "STORAGE_DIR",
    "LOG_DIR",
    "RESULTS_DIR",
    "CONFIG_STORAGE_DIR",
    "configure_logging",
    "get_logger",
    "timed",
]
