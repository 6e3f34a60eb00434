"""Orthogonal filtrations, their quantum symmetry groups and the finite computations around them."""

from .algebra_core import StructuredAlgebra, AlgebraElement
from .filtration import OrthogonalFiltration, ColoredMatrix
from .op_verifier import OperatorMatrix
from .scalars import CycloNumber

__all__ = ["StructuredAlgebra", "AlgebraElement", "OrthogonalFiltration", "ColoredMatrix",
           "OperatorMatrix", "CycloNumber"]
__version__ = "0.1.0"
