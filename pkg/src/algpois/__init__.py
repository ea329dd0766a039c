"""Poisson structures on M x g* induced by Lie group actions.

Construction, certification and integration of the block Poisson structures
built from a Lie group action on a coordinate patch: Lie algebra utilities,
automatic-differentiation infinitesimals, the two section brackets and their
algebroid axioms, Hamiltonian flows with moving-frame reduction, the local
star-group on group-valued sections, and the discretized loop-algebra
central extension.
"""

from . import duals
from .actions import (
    ActionSpec, Infinitesimals, SmoothMap, catalog, catalog_names,
    equivariance_residual, infinitesimal_matrix, prolong,
)
from .algebroid import (
    Section, anchor, anchor_homomorphism_residual, constant_section,
    jacobi_residual_sections, leibniz_residual, lie_derivative_section,
    pointwise_bracket, poly_section, random_poly_section, second_bracket,
)
from .errors import (
    AlgebraMismatch, AlgpoisError, ConfigError, DegeneratePairing,
    DependentBasis, DimensionMismatch, DomainExit, GridMismatch, NonFinite,
    NotClosed, NotFreeRegular, NotInSpan, NotInvariant, NotInvertible,
    OutOfDomain, SingularJacobian, UnknownAction, UnknownAlgebra,
    UnsupportedShape,
)
from .hamilton import (
    MovingFrame, Trajectory, conserved_monitor, flow, frame_flow,
    invariance_residual, moving_frame, preset, rk4_order_ratio, xi_freeze_check,
)
from .liealg import (
    LieAlgebra, adjoint_matrix, algebra, coadjoint_infinitesimal,
    lie_poisson_bivector, matrix_exp, random_group_element,
    structure_constants,
)
from .loopext import (
    CentralState, LoopGrid, LoopSection, QuadraticFunctional, cocycle_beta,
    cocycle_residual_second, E_field, ham_vf_first, ham_vf_second,
    jacobi_pencil_residual, loop_bracket, random_trig_section, zero_bracket,
)
from .poisson import (
    PoissonStructure, assemble, bracket, canonical_action_residual,
    compatibility_residual, jacobi_residual, lie_poisson_structure, pencil,
    semidirect_lie_poisson,
)
from .stargroup import (
    GroupSection, bracket_from_conjugation, exp_section, star_inverse,
    star_product, unit_section,
)

__version__ = "0.1.0"
