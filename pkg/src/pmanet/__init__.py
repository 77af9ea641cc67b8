"""Packet-level simulator for proactive MANET routing (DSDV, FSR, OLSR)."""
from .config import ConfigError, ScenarioConfig, load_config, preset
from .kernels import BACKEND
from .network import Network, run_network

__version__ = "0.1.0"

__all__ = ["BACKEND", "ConfigError", "Network", "ScenarioConfig", "load_config", "preset", "run_network"]
