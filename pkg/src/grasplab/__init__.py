"""Trace-driven study of graph-aware LLC management (GRASP) against classic policies."""
__version__ = "0.1.0"
