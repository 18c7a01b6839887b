"""
Configuration Management Module

Loads numerical defaults and runtime settings from environment variables.
"""

import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

ENV_PREFIX = "ABELTRACE_"


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerance profile shared by tracking, fitting and validation."""

    fit_tol: float = 1e-7
    transversality_threshold: float = 1e-8
    continuation_steps: int = 10
    max_halvings: int = 6
    grid_size: int = 5
    grid_radius: Optional[float] = None
    max_probe_degree: int = 3
    leading_coefficient_tol: float = 1e-7
    validation_tol: float = 1e-6
    support_tol: float = 1e-8
    validation_offsets: int = 20
    seed: int = 0

    def override(self, **changes: Any) -> "Tolerances":
        """Return a copy with the non-None entries of ``changes`` applied."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "fit_tol": self.fit_tol,
            "transversality_threshold": self.transversality_threshold,
            "continuation_steps": self.continuation_steps,
            "max_halvings": self.max_halvings,
            "grid_size": self.grid_size,
            "grid_radius": self.grid_radius,
            "max_probe_degree": self.max_probe_degree,
            "leading_coefficient_tol": self.leading_coefficient_tol,
            "validation_tol": self.validation_tol,
            "support_tol": self.support_tol,
            "validation_offsets": self.validation_offsets,
            "seed": self.seed,
        }


class Config:
    """Application configuration loaded from environment variables."""

    def __init__(self, env_file: Optional[Path] = None) -> None:
        """
        Initialize configuration.

        Args:
            env_file: Path to .env file. If None, searches for .env in project root.
        """
        if env_file is None:
            current_dir = Path(__file__).resolve()
            project_root = current_dir.parent.parent.parent
            env_file = project_root / ".env"

        if env_file.exists():
            load_dotenv(env_file)

        # Environment
        self.environment: str = os.getenv("ENVIRONMENT", "dev")

        # Logging
        self.log_level: str = os.getenv(f"{ENV_PREFIX}LOG_LEVEL", os.getenv("LOG_LEVEL", "INFO"))

        # Numerical defaults
        self.fit_tol: float = self._get_float("FIT_TOL", 1e-7)
        self.transversality_threshold: float = self._get_float("TRANSVERSALITY_THRESHOLD", 1e-8)
        self.continuation_steps: int = self._get_int("CONTINUATION_STEPS", 10)
        self.max_halvings: int = self._get_int("MAX_HALVINGS", 6)
        self.grid_size: int = self._get_int("GRID_SIZE", 5)
        self.grid_radius: Optional[float] = self._get_optional_float("GRID_RADIUS")
        self.max_probe_degree: int = self._get_int("MAX_PROBE_DEGREE", 3)
        self.leading_coefficient_tol: float = self._get_float("LEADING_COEFFICIENT_TOL", 1e-7)
        self.validation_tol: float = self._get_float("VALIDATION_TOL", 1e-6)
        self.support_tol: float = self._get_float("SUPPORT_TOL", 1e-8)
        self.validation_offsets: int = self._get_int("VALIDATION_OFFSETS", 20)
        self.seed: int = self._get_int("SEED", 0)

        # Project Paths
        self.project_root: Path = Path(__file__).resolve().parent.parent.parent
        self.logs_dir: Path = self.project_root / "logs"

        # Validate configuration
        self._validate_config()

        # Ensure directories exist
        self._ensure_directories()

    def _get_float(self, key: str, default: float) -> float:
        """
        Read a float setting.

        Args:
            key: Variable name without the ``ABELTRACE_`` prefix
            default: Value used when the variable is unset

        Raises:
            ValueError: If the variable is set but not a number
        """
        raw = os.getenv(f"{ENV_PREFIX}{key}")
        if raw is None or raw == "":
            return default
        try:
            return float(raw)
        except ValueError:
            raise ValueError(f"Environment variable '{ENV_PREFIX}{key}' must be a number, got '{raw}'")

    def _get_optional_float(self, key: str) -> Optional[float]:
        raw = os.getenv(f"{ENV_PREFIX}{key}")
        if raw is None or raw == "":
            return None
        return self._get_float(key, 0.0)

    def _get_int(self, key: str, default: int) -> int:
        raw = os.getenv(f"{ENV_PREFIX}{key}")
        if raw is None or raw == "":
            return default
        try:
            return int(raw)
        except ValueError:
            raise ValueError(
                f"Environment variable '{ENV_PREFIX}{key}' must be an integer, got '{raw}'"
            )

    def _validate_config(self) -> None:
        """Validate configuration values."""
        valid_log_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if self.log_level.upper() not in valid_log_levels:
            raise ValueError(
                f"Invalid LOG_LEVEL '{self.log_level}'. "
                f"Must be one of: {', '.join(valid_log_levels)}"
            )

        positive = {
            "FIT_TOL": self.fit_tol,
            "TRANSVERSALITY_THRESHOLD": self.transversality_threshold,
            "CONTINUATION_STEPS": self.continuation_steps,
            "LEADING_COEFFICIENT_TOL": self.leading_coefficient_tol,
            "VALIDATION_TOL": self.validation_tol,
            "SUPPORT_TOL": self.support_tol,
            "VALIDATION_OFFSETS": self.validation_offsets,
        }
        for key, value in positive.items():
            if value <= 0:
                raise ValueError(f"{ENV_PREFIX}{key} must be positive, got {value}")

        if self.grid_size < 2:
            raise ValueError(f"{ENV_PREFIX}GRID_SIZE must be at least 2, got {self.grid_size}")
        if self.max_halvings < 0:
            raise ValueError(f"{ENV_PREFIX}MAX_HALVINGS must be non-negative")
        if self.max_probe_degree < 0:
            raise ValueError(f"{ENV_PREFIX}MAX_PROBE_DEGREE must be non-negative")
        if self.grid_radius is not None and self.grid_radius <= 0:
            raise ValueError(f"{ENV_PREFIX}GRID_RADIUS must be positive when set")

    def _ensure_directories(self) -> None:
        """Create necessary directories if they don't exist."""
        self.logs_dir.mkdir(parents=True, exist_ok=True)

    def tolerances(self) -> Tolerances:
        """Tolerance profile built from the configured defaults."""
        return Tolerances(
            fit_tol=self.fit_tol,
            transversality_threshold=self.transversality_threshold,
            continuation_steps=self.continuation_steps,
            max_halvings=self.max_halvings,
            grid_size=self.grid_size,
            grid_radius=self.grid_radius,
            max_probe_degree=self.max_probe_degree,
            leading_coefficient_tol=self.leading_coefficient_tol,
            validation_tol=self.validation_tol,
            support_tol=self.support_tol,
            validation_offsets=self.validation_offsets,
            seed=self.seed,
        )

    def __repr__(self) -> str:
        return (
            f"Config("
            f"environment='{self.environment}', "
            f"log_level='{self.log_level}', "
            f"fit_tol={self.fit_tol}, "
            f"transversality_threshold={self.transversality_threshold}, "
            f"continuation_steps={self.continuation_steps}, "
            f"grid_size={self.grid_size}, "
            f"seed={self.seed}"
            f")"
        )


# Global configuration instance
_config: Optional[Config] = None


def get_config(reload: bool = False) -> Config:
    """
    Get global configuration instance (singleton pattern).

    Args:
        reload: If True, reload configuration from environment

    Returns:
        Config instance
    """
    global _config
    if _config is None or reload:
        _config = Config()
    return _config
