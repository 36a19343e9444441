"""Replicator dynamics for candidate positioning in plurality elections.

Winners of one generation's elections seed the candidate positions of the
next. The package provides the seeded Monte Carlo engine with its variant
dynamics, closed-form bounds and iterated-map analysis of the same process,
and exact Nash equilibrium checks for the one-shot positioning game.
"""

__version__ = "0.1.0"
