"""Optimal and heuristic silence intervals for probabilistic sampling of
scalar log-concave random variables."""

from .bounds import (CurveSource, RateDistortionPoint, exact_curve, fig6_sweep,
                     gauss_distortion_bound, gauss_rate_bound, tau)
from .centering import (CenteringTrace, SilenceDesign, best_estimate, brute_force_optimal,
                        centering_step, is_centered, iterate_centering)
from .conditional import (ConditionalSummary, conditional_summary, right_end_for_mass,
                          sliding_family_scan)
from .density import (CATALOG, Density, DistortionKind, Interval, density_from_config,
                      make_density, mass, verify_log_concavity)
from .errors import (InfeasibleError, InvalidParameterError, NullMassError, SilenceError,
                     SupportSamplingError)
from .heuristics import (FamilyKind, equal_areas_interval, equal_sides_interval, family_sweep,
                         mode_as_mean_interval, super_level_interval)
from .simulator import SimReport, simulate

__version__ = "0.1.0"
