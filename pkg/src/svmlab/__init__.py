"""Soft-margin SVMs with transparent C / sigma^2 behavior and a cheap tuner."""

from .dataset import (
    ClassStats,
    Dataset,
    DistanceRange,
    FoldPlan,
    Sample,
    class_stats,
    intra_class_distance_range,
    load_csv,
    save_csv,
    stratified_folds,
)
from .errors import ComputeError, DataError, SvmlabError
from .kernels import GramMatrix, HMatrix, KernelSpec, gram_matrix, h_matrix, kernel_eval
from .metrics import (
    ConfusionMatrix,
    CvResult,
    FoldOutcome,
    Metrics,
    confusion,
    cross_validate,
    metrics,
)
from .qp import (
    DualProblem,
    DualSolution,
    SolverConfig,
    dual_objective,
    kkt_violations,
    solve_equality_qp,
    solve_kkt_oracle,
    solve_smo,
)
from .search import (
    CSweepSpec,
    EquivalenceReport,
    LineSearchSpec,
    LineTuneOutcome,
    Sigma2Range,
    TuneResult,
    c_lim,
    c_tilde_candidates,
    c_tilde_equivalence_report,
    grid_search,
    line_search,
    linear_c_sweep,
    sigma2_grid,
    sigma2_range_from_data,
    tune_line_search,
    write_tune_report,
)
from .svm import (
    SvDiagnostics,
    SvmModel,
    TrainConfig,
    VcInputs,
    compute_bias,
    decision_value,
    decision_values,
    estimate_c_star,
    load_model,
    loo_sv_bound,
    margin_width,
    predict,
    predict_many,
    save_model,
    train,
    vc_confidence,
)

__version__ = "0.1.0"
