"""Coxeter groups realised over fusion rings, their unfoldings and foldings."""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    FusionCoxError,
    GroupTableError,
    InvariantError,
    RingMismatchError,
    StructureError,
)
from .fusion_ring import (
    FusionRing,
    RingElement,
    build_group_ring,
    build_rep_s3,
    build_tambara_yamagami,
    build_tensor_product,
    build_verlinde,
    build_verlinde_even,
    chebyshev,
    fpdim,
    fpdim_basis,
    validate,
)
from .realisation import (
    CoxeterMatrix,
    GeometricRealisation,
    build_RM_realisation,
    realisation_from_cartan,
    verify_coxeter_relations,
)
from .unfolding import UnfoldedSystem, psi_conjugation_check, unfold
from .reflection_geometry import (
    RealRealisation,
    chamber_orbit,
    classify,
    coxeter_number,
    hyperplane_meets_orbit,
    positive_roots,
    restrict_hyperplane,
    verify_hyperplane_theorem,
)
from .folding import Partition, check_strong_admissible, verify_unfolding_is_strong_admissible
