"""Exact combinatorics of weak Mori dream spaces.

Gale duality, GKZ decompositions, fans and bunches, simplicial fan
censuses, filling cells and a chamber-walk MMP classifier.
"""

__version__ = "0.1.0"

from .cone import Cone, cone_from_generators, cone_from_inequalities
from .fanbunch import (
    Bunch,
    Fan,
    MonomialIdeal,
    bunch_of,
    eff_cone,
    fan_from_ideal,
    fan_of,
    irrelevant_ideal,
    is_F_matrix,
    is_W_matrix,
    mov_cone,
    nef_cone,
    support_is,
    validate_fan,
)
from .gkz import chambers, gkz_cone_at, gkz_decomposition, sigma_gamma
from .lattice import IntMatrix, gale_dual, hnf, kernel_saturated, snf
from .sfenum import enumerate_PSF, enumerate_SF, filling_cells, is_fillable, nu, sharp_completion
from .wmds import (
    DivisorClass,
    GradedPresentation,
    anticanonical_class,
    canonical_ambient,
    check_homogeneous,
    mmp_trace,
    sqm_targets,
)
