"""Spun-normal surfaces in ideal triangulations: Q-matching equations,
boundary maps, admissible polytopes and surface reconstruction."""
from .triangulation import (Triangulation, TriangulationError, ParseError,
                            parse_triangulation, load, validate, double_cover)

__version__ = "0.1.0"
