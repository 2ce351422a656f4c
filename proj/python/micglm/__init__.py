"""Sparse GLM estimation by minimizing an approximated information criterion."""

from ._core import (
    Dataset,
    MicConfig,
    MicFit,
    beta_of_gamma,
    best_subset,
    fit_mle,
    gamma_of_beta,
    inference,
    load_csv,
    log_likelihood,
    make_dataset,
    mic_gradient,
    mic_objective,
    neg_hessian,
    score,
    simulate,
    solve_mic,
    support_names,
    sweep_a,
)

__all__ = [
    "Dataset",
    "MicConfig",
    "MicFit",
    "beta_of_gamma",
    "best_subset",
    "fit_mle",
    "gamma_of_beta",
    "inference",
    "load_csv",
    "log_likelihood",
    "make_dataset",
    "mic_gradient",
    "mic_objective",
    "neg_hessian",
    "score",
    "simulate",
    "solve_mic",
    "support_names",
    "sweep_a",
]
