from pathlib import Path

from pydantic import BaseModel, ConfigDict

from fdesic.cancopt import SolverOptions

from fde_cli.config import Settings
from fde_cli.models.run_config import RunConfig


class RunConfigError(ValueError):
    """The run configuration is valid JSON but cannot be executed."""


class RunContext(BaseModel):
    """Resolved settings of one CLI invocation."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    config: RunConfig
    settings: Settings
    seed: int
    n_jobs: int
    out_dir: Path

    def solver_options(self) -> SolverOptions:
        return self.config.solver.to_options(self.settings, self.seed, self.n_jobs)

    def path(self, name: str) -> Path:
        return self.out_dir / name
