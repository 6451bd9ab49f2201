"""
Environment settings (``.env`` is honoured through python-dotenv).

    WPFP_THREADS    cap on data-parallel width (FFT workers, convergence samples)
    WPFP_LOG_LEVEL  logging level name, default WARNING
    WPFP_LOG_DIR    directory of the log file, default ./logs
"""
import os

from dotenv import load_dotenv

from .errors import ConfigurationError

load_dotenv()


def thread_count() -> int:
    """数据并行宽度，默认使用全部可用核"""
    raw = os.environ.get("WPFP_THREADS")
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"must be a positive integer, got {raw!r}", field="WPFP_THREADS") from None
    if value < 1:
        raise ConfigurationError(f"must be a positive integer, got {raw!r}", field="WPFP_THREADS")
    return value


def log_level() -> str:
    return os.environ.get("WPFP_LOG_LEVEL", "WARNING").upper()


def log_dir() -> str:
    return os.environ.get("WPFP_LOG_DIR", "./logs/")
