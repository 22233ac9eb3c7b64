from .digsic import run_digsic
from .model import run_model
from .network import run_network
from .optimize import run_optimize
from .sweep import run_sweep

__all__ = ["run_digsic", "run_model", "run_network", "run_optimize", "run_sweep"]
