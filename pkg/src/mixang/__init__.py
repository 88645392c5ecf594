"""Combinatorial workbench for mixed-angulations, quivers with potential and quotient hearts."""

from .errors import WorkbenchError

__version__ = "0.1.0"
__all__ = ["WorkbenchError", "__version__"]
