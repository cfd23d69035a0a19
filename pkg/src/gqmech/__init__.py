"""Geometric quantization of time-dependent Hamiltonian mechanics.

Exact Poisson and operator algebra (:mod:`gqmech.symbolic`,
:mod:`gqmech.poisson`, :mod:`gqmech.quantizer`) plus a half-density
evolution layer on grids (:mod:`gqmech.numerics`).
"""

__version__ = "0.1.0"
