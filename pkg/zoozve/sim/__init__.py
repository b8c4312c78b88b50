from .hazards import HazardGraph, build_hazard_graph, hazard_check
from .machine import MachineState, run, step
from .rvv import RvvState, run_rvv, rvv_utilization, step_rvv, strip_mine_iterations, vsetvli

__all__ = [
    "HazardGraph", "MachineState", "RvvState", "build_hazard_graph", "hazard_check",
    "run", "run_rvv", "rvv_utilization", "step", "step_rvv", "strip_mine_iterations",
    "vsetvli",
]
