from .simulate import (
    SimulatedSample,
    clayton_conditional_inverse,
    clayton_conditional_cdf,
    far_direction,
    gaussian_quantile,
    kendall_tau_clayton,
    make_rng,
    pareto_quantile,
    sigma_from_snr,
    simulate_dataset,
    theta_from_kendall_tau,
)
