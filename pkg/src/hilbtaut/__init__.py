"""Cohomology of tautological bundles on Hilbert schemes of points of a surface."""

from hilbtaut.grading import GradedDim

__version__ = "0.1.0"

__all__ = ["GradedDim", "__version__"]
