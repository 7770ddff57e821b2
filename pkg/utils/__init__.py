"""Utility helpers."""

from .helpers import order_doubling

__all__ = ["order_doubling"]
