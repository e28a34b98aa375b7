"""Configuration, orchestration and reporting for the ``szego-lab`` command."""

from .config import ConfigError, ExperimentConfig, ProbeConfig, WalkConfig, load_config, parse_config_text
from .experiment import Report, VerifyReport, run_szego_experiment, run_verify_suite
from .expr import ExprSyntaxError, format_symbol_expr, parse_symbol_expr

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ExprSyntaxError",
    "ProbeConfig",
    "Report",
    "VerifyReport",
    "WalkConfig",
    "format_symbol_expr",
    "load_config",
    "parse_config_text",
    "parse_symbol_expr",
    "run_szego_experiment",
    "run_verify_suite",
]
