"""pcdyn: exact arithmetic for piecewise-Moebius circle dynamics.

Canonical forms and partial actions of piecewise isometric / affine /
projective circle transformations, singularity-growth analysis,
commensurating models, invariant affine/projective structures, holonomy
classification of the resulting exotic circles, and the orientation
double cover — all over exact rationals (plus real quadratic
multipliers where hyperbolic holonomy demands them).
"""

from .circle import Arc, CirclePoint, SidedPoint
from .corpus import NAMED, named_map, reference_structure
from .doubling import DoubledMap, double_embed, reduced_derivative, swap_map
from .errors import (
    BudgetExceeded,
    DegenerateStructure,
    InputError,
    NotCofinite,
    OverlapError,
    PcdynError,
    PoleOnArc,
    TagViolation,
)
from .holonomy import (
    HolonomyClass,
    classify,
    develop_holonomy,
    seam_transition,
    structure_from_charts,
)
from .models import L0Point, L1Point, L2Point, act_L0, act_L1, act_L2, model_diff, tau
from .moebius import Moebius
from .partial import (
    GrowthReport,
    TransfixReport,
    axioms_check,
    indeterminacy_set,
    path_bound_check,
    power_growth,
    semi_index,
    singularity_profile,
    transfix_scan,
)
from .piecewise import (
    AFF,
    C0,
    C1,
    C2,
    ISOM,
    ISOM_PLUS,
    PROJ,
    Piece,
    PiecewiseMap,
    PseudogroupTag,
    canonicalize,
    compose,
    evaluate_sided,
    germ_match,
    identity_map,
    invert,
    pc_equal,
    sided_jet,
)
from .scalars import QuadraticNumber
from .structure import (
    SolveReport,
    StructureFunction,
    nu0,
    pullback,
    smoothness_test,
    solve_invariant,
)

__version__ = "0.1.0"
