from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="FDE_SIC_", env_file=".env", extra="ignore")

    # Logging
    log_level: str = "INFO"
    log_file_name: str = "run.log"

    # Run defaults, overridden by the config file and then by CLI flags
    default_seed: int = 0
    default_jobs: int = 1
    default_out_dir: str = "out"

    # Solver
    restarts: int = 16
    max_iterations: int = 2000


@lru_cache
def get_settings() -> Settings:
    return Settings()
