"""Spectral toolkit for the derivative NLS with quasi-periodic initial data.

Thin python surface over the C++ core: lattice helpers, the branch-tree
counting calculus, the explicit constants, and the coefficient-space solvers.
Problem configs are the same JSON documents the command line tool consumes.
"""

try:
    from ._qpdnls import *  # wheel layout: qpdnls/_qpdnls.so
    from ._qpdnls import __version__
except ImportError:  # build-tree layout: _qpdnls.so on PYTHONPATH
    from _qpdnls import *
    from _qpdnls import __version__
