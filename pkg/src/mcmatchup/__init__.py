"""Non-preemptive mixed-criticality match-up scheduling on a single machine."""

from .core import (
    CriticalPath,
    FeasibilityReport,
    FShape,
    InputError,
    Instance,
    Permutation,
    Schedule,
    check_feasibility,
    critical_path,
    left_shift,
    makespan,
)
from .covering2 import Mc2Covering, Mc2Result, objective_mc2, rebuild_schedule_mc2, solve_mc2
from .covering3 import (
    BottomUpResult,
    Certificate,
    Mc3Covering,
    Mc3Result,
    bottom_up,
    check_optimality_conditions,
    objective_mc3,
    rebuild_schedule_mc3,
    solve_mc3,
)
from .oracle import brute_force_optimum
from .runtime import ExecutionTrace, Scenario, sample_scenario, simulate
from .transforms import lcf, level_sum_lower_bound, restrict

__version__ = "0.1.0"
