"""Energy-cost minimization for renewable-powered cellular networks.

Energy cooperation (aggregator trading and sharing), cost-aware communication
cooperation (offloading, spectrum sharing, CoMP) and their joint schemes.
"""

from .model import (BaseStation, ChannelMatrix, MobileTerminal, NetLoad, PowerProfile, Scenario,
                    Tariff, ValidationReport, case_study, make_scenario, net_load,
                    validate_scenario)
from .results import SchemeResult
from .schemes import SCHEMES, compare_all, run_scheme
from .scenario_io import generate_scenario, load_case_study, parse_scenario

__version__ = "0.1.0"

__all__ = [
    "BaseStation", "ChannelMatrix", "MobileTerminal", "NetLoad", "PowerProfile", "SCHEMES",
    "Scenario", "SchemeResult", "Tariff", "ValidationReport", "case_study", "compare_all",
    "generate_scenario", "load_case_study", "make_scenario", "net_load", "parse_scenario",
    "run_scheme", "validate_scenario",
]
