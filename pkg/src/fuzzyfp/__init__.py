"""Fixed-point solvers for fuzzy metric spaces, with checkable certificates."""

from .contraction import (
    MultiMap,
    SingleMap,
    ZetaFn,
    affine,
    custom_map,
    custom_zeta,
    linear,
    probe_pi_membership,
    verify_metric_condition,
    verify_multi_contraction,
    verify_single_contraction,
    zeta_apply,
)
from .errors import ConfigurationError, DomainError, FuzzyFPError, NumericError, RangeError
from .fuzzy_metric import (
    FuzzyMetric,
    PointSpace,
    check_fm_axioms,
    classify_sequence,
    euclidean,
    standard_from_metric,
)
from .hausdorff import FiniteCompactSet, hausdorff_eval, point_to_set
from .solver import Certificate, SolverConfig, inclusion_residual, solve_classic, solve_multi, solve_single
from .tnorm import LUKASIEWICZ, MINIMUM, PRODUCT, TNorm, check_tnorm_axioms, probe_h_type

__version__ = "0.1.0"
