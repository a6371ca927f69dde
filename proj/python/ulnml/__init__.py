"""Penalty selection by minimizing an analytic upper bound of the luckiness
normalized maximum likelihood code length.

Everything is implemented in the C++ core; this package re-exports the
bound evaluations, the alternating weight-selection fits for penalized
regression and Gaussian precision estimation, the synthetic generators,
and the one-dimensional quadrature oracle.
"""

from ._core import (
    Box,
    GgmFit,
    Interval,
    Lambda,
    NormalizerBound,
    RidgeFit,
    double_ring_precision,
    double_ring_sample,
    fit_ggm,
    fit_ridge,
    gap_check,
    gen_synth_regression,
    grid_points,
    kl_gaussian,
    lnml_quadrature,
    load_csv,
    log_normalizer_lasso,
    log_normalizer_tikhonov,
    model_log_normalizer,
    predict,
    project_box,
    ridge_ulnml,
    rmse,
    solve_ggm,
    solve_ridge,
    update_lasso,
    update_tikhonov,
    z_quadrature,
)

__all__ = [
    "Box",
    "GgmFit",
    "Interval",
    "Lambda",
    "NormalizerBound",
    "RidgeFit",
    "double_ring_precision",
    "double_ring_sample",
    "fit_ggm",
    "fit_ridge",
    "gap_check",
    "gen_synth_regression",
    "grid_points",
    "kl_gaussian",
    "lnml_quadrature",
    "load_csv",
    "log_normalizer_lasso",
    "log_normalizer_tikhonov",
    "model_log_normalizer",
    "predict",
    "project_box",
    "ridge_ulnml",
    "rmse",
    "solve_ggm",
    "solve_ridge",
    "update_lasso",
    "update_tikhonov",
    "z_quadrature",
]

__version__ = "0.1.0"
