"""Stability conditions for derivative-growth function classes.

Weight sequences, weight functions, and weight matrices, together with
checkers for the conditions that make the associated classes stable
under composition, inversion, and ODE solving; certificate pipelines
that construct explicit derivative bounds; and an exact-rational jet
oracle to validate them against.
"""

from .config import RunConfig, DEFAULT_CONFIG, checkpoints
from .verdicts import Status, Verdict
from .sequences import (WeightSequence, make_gevrey, make_appendix_a,
                        make_sawtooth, from_log_terms, adjust_prefix_max,
                        check_weakly_log_convex, check_growth,
                        check_almost_increasing, compare_inclusion,
                        seminorm, sparse_from_spec)
from .composition import (m_circ_dp, m_circ_exact, m_circ_bruteforce,
                          check_fdb_property, n_beta_coefficients,
                          n_beta_total)
from .weight_functions import (WeightFunction, ConjugateFunction,
                               PowerFamily, make_weight_function,
                               power_weight, young_conjugate,
                               conjugate_back, check_omega_conditions,
                               check_thm3_condition, check_subadditive,
                               omega_matrix, seminorm_omega)
from .matrices import (WeightMatrix, MatrixVerdict, CONDITIONS,
                       check_matrix_condition, build_remark2,
                       verify_lemma1, ImplicationReport)
from .bounds import (BoundCertificate, MajorantSpec, rai_witness,
                     majorant_derivatives, majorant_jet_exact,
                     ode_bound_roumieu, neumann_inverse_bound,
                     rescale_for_neumann, inverse_fn_bound,
                     lemma4_construct, ode_bound_beurling,
                     crosscheck_bound)
from .jets import (Jet, jet_from_function, exp_jet, geometric_jet,
                   identity_jet, zero_jet, jet_mul, jet_add, jet_scale,
                   jet_reciprocal, jet_compose, jet_compose_bruteforce,
                   jet_functional_inverse, jet_ode_solve, growth_profile)
from .logutil import UnrepresentableError

__version__ = "0.1.0"
