"""Generalized conditional entropies of bipartite quantum states under local
measurements on B, their minimization, and derived correlation measures."""

from .entropy import EntropicFunction, linear, tsallis, von_neumann

__version__ = "0.1.0"
