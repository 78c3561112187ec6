from .checks import CHECKS, OracleCheck, random_configurations, run_oracle_suite
from .montecarlo import (McConfig, McEstimate, mc_bs_price, mc_exercise_probability, mc_payoff_event,
                         mc_prob_positive_return, standard_normals)
