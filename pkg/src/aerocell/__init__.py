"""Energy prosumption simulator for UAV-mounted 5G base stations."""

from .config import Config, load_config
from .kernel import BACKEND
from .sim_engine import MetricsReport, run_simulation

__all__ = ["BACKEND", "Config", "MetricsReport", "load_config", "run_simulation"]
__version__ = "0.1.0"
