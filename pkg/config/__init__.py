"""Configuration package for the consistent-pairs toolkit."""

from .settings import Settings, get_settings

__all__ = ["Settings", "get_settings"]
