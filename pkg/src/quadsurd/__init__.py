"""Continued fractions of sqrt(D/Q) and units of the orders Z[sqrt(Dq^2/Q)] and Z[sqrt(DQ)]."""

from .cfrac import PeriodicCF, Surd, expand, surd_new
from .rings import QuadUnit, fundamental_unit, ring_context

__version__ = "0.1.0"

__all__ = ["PeriodicCF", "QuadUnit", "Surd", "expand", "fundamental_unit", "ring_context", "surd_new"]
