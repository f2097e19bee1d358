"""
Engine settings, read from the environment and overridable per run.
"""

import os
import threading
from dataclasses import dataclass, replace
from typing import Optional


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw.strip(), 0)
    except ValueError:
        return default


@dataclass(frozen=True)
class EngineSettings:
    """Limits and defaults for the enumeration kernels"""
    max_elements: int = 12
    hard_limit: int = 14
    allow_large: bool = False
    depth: int = 4
    ring_limit: int = 4096
    budget: int = 2 ** 64
    workers: int = 1
    zeta_dps: int = 30
    log_level: str = "WARNING"
    log_dir: Optional[str] = None

    def element_cap(self) -> int:
        """Largest element count the partition enumeration accepts"""
        if self.allow_large:
            return max(self.max_elements, self.hard_limit)
        return min(self.max_elements, self.hard_limit)

    def override(self, **changes) -> "EngineSettings":
        clean = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **clean)


def load_settings() -> EngineSettings:
    """Build settings from SESQ_* environment variables"""
    return EngineSettings(
        max_elements=_env_int("SESQ_MAX_ELEMENTS", 12),
        hard_limit=_env_int("SESQ_HARD_LIMIT", 14),
        depth=_env_int("SESQ_DEPTH", 4),
        ring_limit=_env_int("SESQ_RING_LIMIT", 4096),
        budget=_env_int("SESQ_BUDGET", 2 ** 64),
        workers=max(1, _env_int("SESQ_WORKERS", 1)),
        zeta_dps=_env_int("SESQ_ZETA_DPS", 30),
        log_level=os.getenv("SESQ_LOG_LEVEL", "WARNING"),
        log_dir=os.getenv("SESQ_LOG_DIR") or None,
    )


_settings_instance: Optional[EngineSettings] = None
_settings_lock = threading.Lock()


def get_settings() -> EngineSettings:
    """Get or create the process-wide settings"""
    global _settings_instance
    with _settings_lock:
        if _settings_instance is None:
            _settings_instance = load_settings()
        return _settings_instance


def set_settings(settings: EngineSettings) -> EngineSettings:
    """Install settings for the rest of the process (CLI flags)"""
    global _settings_instance
    with _settings_lock:
        _settings_instance = settings
        return settings
