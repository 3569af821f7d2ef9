"""Coxeter complexes, apartments, flags at infinity and finite buildings."""
from .apartment import (
    Diamond,
    SectorReport,
    apply_affine_weyl,
    chamber_roots,
    diamond,
    dominant_chamber,
    positive_roots,
    regular_direction,
    sector_membership,
    sector_recovery_check,
)
from .coxeter import CoxeterComplex, CoxeterSimplex, coxeter_complex
from .finite import AxiomResult, FiniteFlagComplex, check_axioms, finite_flag_complex
from .flags import Direction, Flag, Frame, common_frame, flag_at_infinity
