"""Exact classification of finite-rank perturbations of the unilateral shift.

Operators ``T = S_k + F`` are stored as ``(d, k, C)`` (see
:mod:`shiftpert.model`); every property question reduces to small matrix
computations on ``C`` and is cross-checked by dense truncations in
:mod:`shiftpert.oracle`.
"""

from .classification import (
    ClassificationReport,
    CnuStatus,
    CnuVerdict,
    INCONCLUSIVE,
    NA,
    classify,
    cnu_status,
    eigen_blocks,
    is_analytic,
    is_contraction,
    is_hyponormal,
    nonzero_point_spectrum,
    report_to_dict,
)
from .defect import (
    defect_dimensions,
    defect_grams,
    defect_inclusion,
    douglas_lambda,
    stage_defect_grams,
)
from .kernel import Tolerance
from .model import (
    DimensionError,
    OperatorSpec,
    SpecFormatError,
    apply,
    apply_adjoint,
    build_operator,
    load_spec,
    rank_one_operator,
    shift_spec,
    stage_block,
    truncate,
)

__version__ = "0.1.0"
