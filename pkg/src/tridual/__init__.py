"""Spectra of tridiagonal matrices under diagonal negation, applied to
sextic quasi-exactly-solvable potentials."""

from .qes import Parity, QesParams
from .tridiag import (
    CharacteristicPolynomial,
    ConvergenceError,
    EigenvalueSet,
    TridiagonalMatrix,
    char_poly,
    determinant,
    eigenvalues,
    eigenvalues_symmetric,
    is_symmetrizable,
    negate_diagonal,
    symmetrize,
)

__version__ = "0.1.0"
