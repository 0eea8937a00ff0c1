"""compopt: duality-free stochastic composition optimization."""

__version__ = "1.0.0"
