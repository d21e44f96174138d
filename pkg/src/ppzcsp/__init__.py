"""Generalized ppz for (d,k)-CSP with exact analysis tools."""

from ppzcsp.formula import Constraint, Formula, Literal, parse, serialize
from ppzcsp.kernels import BACKEND

__all__ = ["BACKEND", "Constraint", "Formula", "Literal", "parse", "serialize"]
__version__ = "0.1.0"
