"""Bi-objective (fuel cost, duration) long-haul truck route planning."""

__version__ = "0.1.0"
