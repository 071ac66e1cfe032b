"""Distributed beam scheduling for coexisting mmWave access points."""
from .config import ConfigError, SystemConfig, load_config
from .harness import ExperimentSpec, ResultSet, empirical_cdf, run_experiment
from .schedulers import (BudgetExceeded, EvalCounter, enumerate_sequences, exhaustive_search,
                         greedy_schedule, learning_schedule, lri_update, random_schedule)
from .utility import Scenario

__all__ = [
    "BudgetExceeded", "ConfigError", "EvalCounter", "ExperimentSpec", "ResultSet", "Scenario",
    "SystemConfig", "empirical_cdf", "enumerate_sequences", "exhaustive_search",
    "greedy_schedule", "learning_schedule", "load_config", "lri_update", "random_schedule",
    "run_experiment",
]
