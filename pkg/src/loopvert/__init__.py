"""Exact computations with formal loops, chiral differential operators on affine
space and their vertex-algebra structure."""

from .scalars import NotAUnitError, RingDescriptor, RingElem, RingMismatchError, ring_invert
from .series import NilLaurent, NotNilLaurentError, format_series, mul_exact, nl_invert, nl_is_invertible
from .multipoint import (MultiPointSeries, expand_at_cluster, kappa_groups, mp_diagonal_nu,
                         mp_diagonal_nu_inverse, mp_factorize_kappa, mp_invert)
from .polys import Poly
from .loops import (EpsilonProfile, EtalePresentation, NotEtaleError, SeedError, epsilon_membership,
                    hensel_lift, is_loop_point, theta_projection, truncated_loop_ring, truncation_ring_maps)
from .cd import CDElement, GenMode, VacVector, basis_states, commutator_table, normal_order, vac_act, vac_basis
from .window import VacWindow, vac_window_basis, vac_window_transition, window_vacuum
from .vertex import (borcherds_check, locality_check, msv_differential, nth_product, skew_symmetry_holds,
                     translate)
from .chiral import DeltaElement, chiral_vs_vertex, delta_canonicalize, mu_generator, unit_epsilon_check
from .jets import (JetCDElement, JetMap, TruncSeries, check_relations, compose_sharp, invert_jet, phi_sharp,
                   vertex_generator_images)
from .textio import ParseError, Session, parse_expression

__version__ = "0.1.0"
