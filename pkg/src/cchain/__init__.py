"""Exact analysis of the commuting Markov chain on finite groups, with an
emphasis on CA groups (commuting is transitive off the center)."""

__version__ = "0.1.0"

from .bounds import (BoundReport, bound_report, cutoff_check, eigen_sandwich,
                     lower_bound_cheeger, phi_of, phi_star_bruteforce, upper_bound_coupling,
                     upper_bound_minorization)
from .chain import (Distribution, MixingProfile, check_class_start_equality,
                    check_detailed_balance, lumped_chain, mixing_profile, stationary,
                    synthetic_ca_chain, transition_matrix, two_step_check)
from .config import Config
from .dihedral import (closed_form_lumped_matrix, dihedral_bound_lemmas, dihedral_closed_form,
                       dihedral_constant_mixing_check)
from .fields import FieldSpec, field_add, field_inv, field_make, field_mul
from .groups import (CapExceeded, GroupError, GroupTable, build_affine, build_cyclic,
                     build_dihedral, build_family, build_gl2, build_heisenberg,
                     build_psl2_char2, from_table, load_cayley_json)
from .rational import RationalMatrix, RationalPolynomial, QuadraticSurd
from .report import AnalysisReport, analyze
from .spectral import (SpectralSummary, cacp_charpoly, cacp_factors, direct_charpoly_check,
                       numeric_spectrum)
from .structure import CASignature, GroupStructure, analyze_structure

__all__ = [name for name in dir() if not name.startswith("_")]
