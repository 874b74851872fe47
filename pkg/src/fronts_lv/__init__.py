"""Numerical lab for a diffusive prey-predator system with two free boundaries."""
from .errors import (
    ConfigError,
    FrontsError,
    InconclusiveThreshold,
    InsufficientData,
    InvariantBreach,
    RegimeError,
    SemiWaveError,
    SolverError,
)
from .model import DerivedConstants, InitialProfile, ModelParams, derive_constants, iterate_coexistence_bounds
from .scheme import DetectConfig, SolverConfig
from .semiwave import SemiWave, SpeedTable, kappa, solve_semiwave, speed_table
from .logistic_fb import Classification, classify_scalar, front_speed, solve_logistic
from .fbm_solver import FrontState, Trajectory, resample_physical, simulate, step
from .analysis import Outcome, SpeedReport, classify_outcome, measure_speeds, moving_frame_error, speed_regime_bounds
from .thresholds import CriteriaReport, GammaThreshold, check_criteria, critical_gamma, named_thresholds, separation_condition

__version__ = "0.1.0"
