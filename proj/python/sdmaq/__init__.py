"""Stability regions, feedback budgets and queue simulation for zero-forcing
SDMA with limited feedback."""

from ._sdmaq import (
    NumericError,
    SystemParams,
    __version__,
    boundary_scale,
    bits_for_eta,
    contains,
    db_to_linear,
    decompose,
    delay_ratio_bound,
    delta_for_bits,
    delta_for_delay_ratio,
    departure_rate,
    departure_rates,
    estimate_departure_rate,
    feedback_bits_for_delta,
    index_set,
    kappa,
    kingman_exponent,
    max_weight_decision,
    perturbation_coefficient,
    pk_average_delay,
    power_region_sample,
    regularized_upper_gamma,
    simulate,
    single_queue,
    stability_polytope,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
