"""Swap-strategy routing of dense commuting gate layers onto constrained
qubit topologies, with analytic fidelity and execution-time estimation."""

__version__ = "0.1.0"
