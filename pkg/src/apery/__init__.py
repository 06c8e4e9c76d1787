"""Period sequences of Laurent polynomials, their Picard-Fuchs operators, Apery
limits, and the normal-function values they are compared against."""

from .algebraic import AlgebraicNumber
from .diffop import DiffOperator, WeylOperator, apply_to_series, fl_transform_operator, local_exponents, regularize_sequence, singular_locus, to_recurrence
from .errors import AmbiguousFit, CaseFormatError, CaseLoadError, DomainError, Obstructed
from .lattice import LatticePolytope, convex_hull, is_reflexive, is_tempered_2d, newton_polytope, normalized_volume, polar_dual
from .laurent import LaurentPolynomial, RationalSequence, constant_term_sequence, multiply, partial_constant_term
from .opfit import fit_operator
from .recognize import ConstantBasis, integer_relation, recognize_constant
from .sequences import apery_limit, inhomogeneous_constant, normalize_thnf, solve_homogeneous, solve_inhomogeneous

__version__ = "0.1.0"
