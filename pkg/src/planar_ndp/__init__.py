"""Approximation algorithms for node-disjoint paths in planar graphs."""

__version__ = "0.1.0"
