"""Configuration driven command line interface: QFI and CFI sweeps, theta_max tables, Monte Carlo campaigns and
figure data with gnuplot scripts."""

from quaperture.cli.config import RunConfig, load_config, ConfigurationError
from quaperture.cli.main import main

__all__ = ["RunConfig", "load_config", "ConfigurationError", "main"]
