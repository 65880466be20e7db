"""Discrete temporal-graph simulator for semantic-communication LEO networks."""

__version__ = "0.1.0"
