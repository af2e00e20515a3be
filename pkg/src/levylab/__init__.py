"""Monte Carlo laboratory for stochastic integration against cylindrical Levy noise."""

from .errors import (AssumptionViolation, ConfigError, InfiniteMomentError,
                     LevyLabError, MeasurabilityError, PreconditionError)
from .rng import RngStream, make_streams
from .estimators import (BoundVerdict, MomentAccumulator, MomentEstimate,
                         estimate_p_moment, fit_loglog_slope, merge_accumulators)
from .levy import (BrownianMotion, CompoundPoisson, CompoundPoissonCylLevy,
                   DiagonalCylLevy, DriftedCompoundPoisson, GaussianJumps,
                   SymmetricAlphaStable, SymmetrizedExponentialJumps,
                   TwoPointJumps, check_weak_p_condition, cyl_increment,
                   cyl_increments, levy_p_moment, rp_norm_estimate,
                   sample_increments, weak_p_norm)
from .operators import (FiniteRankOperator, PiPBounds, composition_decay,
                        diagonal_operator, hs_norm, identity_operator,
                        pi_p_bounds, pi_p_lower, pi_p_upper, rank_one,
                        schwartz_bound_check)
from .integral import (SimpleIntegrand, SimpleOperatorRV, drift_martingale_split,
                       gaussian_counterexample, integrate_simple, lambda_norm,
                       radonify, stable_counterexample,
                       verify_integral_continuity, verify_radonification_bound)
from .spde import (MildProblem, SemigroupSpec, bound_functions_check,
                   contraction_constants, exp_euler_solve, heat_semigroup,
                   picard_solve, semigroup_apply, stochastic_continuity_probe,
                   stochastic_convolution, weighted_norm)

__version__ = "0.1.0"
