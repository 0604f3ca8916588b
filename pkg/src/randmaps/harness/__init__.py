from .config import EXPERIMENTS, ExperimentConfig, load_config_file
from .curves import emit_density_curve
from .experiments import RunResult, run

__all__ = ["EXPERIMENTS", "ExperimentConfig", "RunResult", "emit_density_curve", "load_config_file", "run"]
