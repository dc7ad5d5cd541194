"""Exact and numeric tools for Neron models of degenerating weight -1 variations."""

__version__ = "0.1.0"

from .errors import NeronError
from .linalg import FiniteAbelianGroup, IntMatrix, LatticeSubgroup, RatMatrix
from .monodromy import (
    MonodromyOperator,
    admissible_class_subgroup,
    component_group,
    invariant_lattice,
    is_unipotent,
    link_cohomology_bidisk,
    log_unipotent,
    quasi_unipotent_reduce,
)
from .hodge import (
    HodgeFiltrationStep,
    NilpotentOrbit,
    check_hypothesis_C,
    ggk_invariant_part,
    limit_mhs,
    purity_check,
    weight_monodromy_filtration,
)
from .fibers import FiberPoint, SemiTorusFiber, fiber_distance, jacobian_fiber, reduce_point
from .normal_functions import (
    CurveCohomologyClass,
    NormalFunctionExpr,
    check_admissible,
    cohomology_class_curve,
    evaluate,
    monodromy_defect,
    torsion_nf_from_class,
    zucker_limit,
)
from .models import (
    ModelFiber,
    blow_down,
    bps_fiber_curve,
    clemens_extend,
    clemens_fiber,
    ggk_fiber0,
    zucker_fiber0,
)
