"""Offset inference against fixed-priority real-time tasks from a low-priority
observer's own execution intervals."""

from .capability import analyze_pair, choose_lambda, coverage_fraction, coverage_ratio
from .harness import ExperimentSpec, run_attack, run_experiment
from .ladder import build_ladder, infer, infer_arrival_column, mark_intervals, predict_arrival
from .metrics import aggregate, precision_ratio, success
from .model import Interval, TaskKind, TaskSet, TaskSpec, load_taskset, save_taskset, validate_taskset
from .observer import ObserverConfig, reconstruct_intervals
from .sim import VariationConfig, response_time_analysis, simulate
from .taskgen import GenConfig, VictimMode, generate_taskset

__version__ = "0.1.0"
