"""Closed-form oracles, rate checkers and the lower-bound studies."""
from .certify import check_haugazeau_rates, check_subgradient_rates, lipschitz_estimates
from .instances import random_halfspace_pair_subproblem, random_polyhedral_instance, random_spd
from .lower_bounds import (ModelProblemParams, build_model_problem, instrumented_family,
                           lower_bound_fk, model_optimum, run_analyze_lower_bdd)
from .planar import (NoRegularityParams, TwoHalfspaceParams, fit_power_law,
                     no_regularity_lower_step, project_power_set, run_no_regularity,
                     run_two_halfspace, two_halfspace_gamma, two_halfspace_problem,
                     two_halfspace_recurrence)
from .regularity import (distance_to_feasible, estimate_kappa, max_cut_distance,
                         regularity_ratio, trajectory_kappa)
from .sequences import (M2_GRID, SequenceBoundParams, haugazeau_eps_bar, search_M2,
                        seq_lower_bound, seq_upper_bound, worst_case_sequence)

__all__ = [
    "M2_GRID", "ModelProblemParams", "NoRegularityParams", "SequenceBoundParams",
    "TwoHalfspaceParams", "build_model_problem", "check_haugazeau_rates",
    "check_subgradient_rates", "distance_to_feasible", "estimate_kappa", "fit_power_law",
    "haugazeau_eps_bar", "instrumented_family", "lipschitz_estimates", "lower_bound_fk",
    "max_cut_distance", "model_optimum", "no_regularity_lower_step", "project_power_set",
    "random_halfspace_pair_subproblem", "random_polyhedral_instance", "random_spd",
    "regularity_ratio", "run_analyze_lower_bdd", "run_no_regularity", "run_two_halfspace",
    "search_M2", "seq_lower_bound", "seq_upper_bound", "trajectory_kappa",
    "two_halfspace_gamma", "two_halfspace_problem", "two_halfspace_recurrence",
    "worst_case_sequence",
]
