from .vmf import BallVmfParams, bessel_i, log_bessel_i, log_c_p, logpdf_ball, logpdf_sphere
from .epls import (
    ball_loglik,
    empirical_survival,
    fit_epls,
    fit_epls_at,
    phi_weights,
    threshold_from_k,
    truncated_mean,
    v_hat,
)
from .shrinkage import conjugate_map, log_posterior, map_direction, soft_threshold, sparse_map
