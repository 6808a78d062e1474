"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` (e.g. ``"empty-region"``)
so CLI consumers and tests can dispatch on it without parsing messages.
"""

from __future__ import annotations


class HyposymError(Exception):
    """Base class; ``code`` is a stable tag, the message adds context."""

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)


class RegionError(HyposymError):
    """Grid/region construction or query failure."""


class SurfaceError(HyposymError):
    """Double-graph or curve validation failure."""


class ConditionError(HyposymError):
    """Condition checker failure (bad parameters, no admissible radius)."""


class VariationError(HyposymError):
    """Cut-off / deformation / first-variation machinery failure."""


class ConfigError(HyposymError):
    """CLI / run-configuration validation failure."""
