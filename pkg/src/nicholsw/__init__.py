"""Exact-arithmetic toolkit for rank-2 diagonally braided Nichols algebras.

The package constructs the two 4p-dimensional Nichols algebras attached to a
primitive 2p-th root of unity, their one-vertex Yetter-Drinfeld modules, the
64p^4-dimensional double-bosonization Hopf algebra, affine sl(2) singular
vectors over the rational-function field Q(k), and the multi-boson free-field
apparatus (screenings, W-algebra generators, Hamiltonian reduction), all over
exact scalars.
"""

from .scalars import CycScalar, LevelScalar, qint, qfact, qbinom

__all__ = [
    "CycScalar",
    "LevelScalar",
    "qint",
    "qfact",
    "qbinom",
]
