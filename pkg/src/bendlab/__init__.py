"""Bending, quakebends and length minima for quasifuchsian punctured-torus groups."""

from .bendsolve import BendingAngles, angles_from_lengths, group_from_bending, lengths_from_angles
from .errors import BendLabError
from .h3geom import MoebiusMap, complex_distance, complex_length
from .minima import Weights, kerckhoff_minimum, line_of_minima
from .ptorus import FuchsianPoint, MarkedGroup, TraceTriple, group_from_triple

__version__ = "0.1.0"

__all__ = [
    "BendLabError",
    "BendingAngles",
    "FuchsianPoint",
    "MarkedGroup",
    "MoebiusMap",
    "TraceTriple",
    "Weights",
    "angles_from_lengths",
    "complex_distance",
    "complex_length",
    "group_from_bending",
    "group_from_triple",
    "kerckhoff_minimum",
    "lengths_from_angles",
    "line_of_minima",
]
