"""RSS-based UAV emitter localization with CRLB-driven trajectory planning."""

from .channel import ChannelParams, Measurement, Point2
from .config import ScenarioConfig, load_scenario, preset
from .estimator import GridSpec
from .fisher import FimMatrix
from .planner import PlannerKind
from .simulate import compare_planners, run_monte_carlo, run_single

__version__ = "0.1.0"
