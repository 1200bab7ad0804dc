"""FDTD simulation of moving space-time interfaces with a hybrid Yee scheme."""
from .grid import GridSpec, InterfaceTrajectory, MaterialMap, OverlappingTransitionRegions, ValidationError
from .hybrid import Simulation, run_simulation
from .scenario import ParseError, Scenario, load_scenario, loads_scenario

__all__ = ["GridSpec", "InterfaceTrajectory", "MaterialMap", "OverlappingTransitionRegions",
           "ValidationError", "Simulation", "run_simulation", "ParseError", "Scenario",
           "load_scenario", "loads_scenario"]
__version__ = "0.1.0"
