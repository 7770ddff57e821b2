# Tests package
"""Test suite for mahlerpairs."""

__all__ = []
