"""Batch minimum-norm regression toolkit."""

from ._core import (
    BoundPair,
    NumericError,
    UsageError,
    __version__,
    batch_min_norm,
    bmn_lower_bound,
    bmn_optimal_batch,
    bmn_snr_threshold,
    bmn_upper_bound,
    bmn_upper_bound_limit,
    estimate_risk,
    generate_instance,
    iterative_batch_min_norm,
    lb_c_factor,
    lb_c_factor_limit,
    min_norm,
    mn_asymptotic_risk,
    mn_gamma_opt,
    ridge,
    sbmn_b1_risk,
    sbmn_lower_bound,
    sbmn_optimal_batch,
    sbmn_upper_bound,
    sbmn_upper_bound_limit,
    server_average,
    server_avg_asymptotic_risk,
    server_avg_optimal_batch,
    shrunk_batch_min_norm,
    subsample_min_norm,
)

__all__ = [
    "BoundPair",
    "NumericError",
    "UsageError",
    "__version__",
    "batch_min_norm",
    "bmn_lower_bound",
    "bmn_optimal_batch",
    "bmn_snr_threshold",
    "bmn_upper_bound",
    "bmn_upper_bound_limit",
    "estimate_risk",
    "generate_instance",
    "iterative_batch_min_norm",
    "lb_c_factor",
    "lb_c_factor_limit",
    "min_norm",
    "mn_asymptotic_risk",
    "mn_gamma_opt",
    "ridge",
    "sbmn_b1_risk",
    "sbmn_lower_bound",
    "sbmn_optimal_batch",
    "sbmn_upper_bound",
    "sbmn_upper_bound_limit",
    "server_average",
    "server_avg_asymptotic_risk",
    "server_avg_optimal_batch",
    "shrunk_batch_min_norm",
    "subsample_min_norm",
]
