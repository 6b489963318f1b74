"""Functional dimension and functional rank of linear PDE symbol systems.

Exact rational linear algebra throughout: symbolic systems and their
prolongations, Spencer δ-cohomology, Hilbert polynomials, Cartan characters
and closed forms for generalized complete intersections.
"""

from .cartan import CartanCharacters, GenericityFailure, cartan_test, characters, generic_flag, genre_and_integer, involutivity_via_spencer
from .fileformat import InputError, dumps, loads, parse_system
from .gci import classify_gci, elementary_symmetric, fitting_minors, gci_dimension, gci_rank, lemma_check
from .hilbert import (
    HilbertProfile,
    NoStabilization,
    dimension_and_rank,
    fit_polynomial,
    hilbert_function,
    hilbert_profile,
    polynomial_from_resolution,
)
from .presets import PRESET_NAMES, preset
from .qlinalg import ExactMatrix, Subspace, intersect, kernel_basis, rank
from .report import AnalysisOptions, AnalysisReport, analyze
from .spencer import SpencerTable, cohomology_dim, spencer_table
from .symbolic import EquationSymbol, SymbolicSystem, new_system, order_profile, prolong

__version__ = "0.1.0"
