"""Exact arithmetic for snake-poset order polytopes."""

__version__ = '0.1.0'
