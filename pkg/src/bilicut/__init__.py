"""Lower bounds for box-constrained bilinear-plus-quadratic minimization.

Two McCormick-based relaxations (a symmetric LP lifting and a bilinear QP
lifting), SVD-guided disjunctive cuts separated by cut-generating LPs, a
cutting-plane driver, a reproducible instance generator, and an experiment
harness.
"""

from .cuts import (
    Cut,
    SingularPair,
    compare_product_bounds,
    disjunction_mccormick,
    disjunction_secant,
    extended_mccormick_rows,
    rhs_mccormick_avg,
    rhs_secant,
    secant_inequalities,
    separable_form,
    solve_cglp,
    tangent_linearize,
    unit_vector_rows,
    verify_symmetric_implies_bilinear,
    violation_svd,
)
from .driver import (
    BoundTrace,
    LoopConfig,
    cutting_plane,
    gap_closed,
    gap_report,
    relative_gap,
    upper_bound,
)
from .instances import (
    BilinearInstance,
    GenParams,
    from_json,
    generate,
    to_json,
    true_objective,
    validate,
)
from .linalg import interval_dot, svd, sym_eig
from .relaxations import VariableMap, box_rows, build_bmc, build_smc, mccormick_rows
from .solver import LinearRow, QuadraticModel, SolveResult, solve

__version__ = "0.1.0"

__all__ = [
    "BilinearInstance",
    "BoundTrace",
    "Cut",
    "GenParams",
    "LinearRow",
    "LoopConfig",
    "QuadraticModel",
    "SingularPair",
    "SolveResult",
    "VariableMap",
    "box_rows",
    "build_bmc",
    "build_smc",
    "compare_product_bounds",
    "cutting_plane",
    "disjunction_mccormick",
    "disjunction_secant",
    "extended_mccormick_rows",
    "from_json",
    "gap_closed",
    "gap_report",
    "generate",
    "interval_dot",
    "mccormick_rows",
    "relative_gap",
    "rhs_mccormick_avg",
    "rhs_secant",
    "secant_inequalities",
    "separable_form",
    "solve",
    "solve_cglp",
    "svd",
    "sym_eig",
    "tangent_linearize",
    "to_json",
    "true_objective",
    "unit_vector_rows",
    "upper_bound",
    "validate",
    "verify_symmetric_implies_bilinear",
    "violation_svd",
]
