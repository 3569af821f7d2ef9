"""Exact arithmetic for asymptotic cones of P(m, R) and their buildings."""
from .errors import ConekitError, DomainError, NotPositiveDefinite, ParseError, ScaleError
from .hahnfield import INFINITY, ONE, RHO, ZERO, HahnNumber, parse_hahn

__version__ = "0.1.0"
