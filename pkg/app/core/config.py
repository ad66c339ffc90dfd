# app/core/config.py
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Runtime defaults for the toolkit.

    Every field can be overridden with an ND_-prefixed environment variable
    (e.g. ND_TICK=1e-3) or a .env file next to the working directory.
    Command-line flags take precedence over both.
    """

    tick: float = 1e-6  # seconds per tick
    horizon: float = 1000.0  # simulated seconds before a run is aborted
    seed: int = 0
    jobs: int = 1
    runs: int = 1000
    truncation_cap: float = 1e10  # seconds, explore output clamp
    exclude_fraction: float = 0.9  # compare drops rows above this share of the horizon
    energy_adv: float = 1.0
    energy_scan: float = 1.0
    log_level: str = "INFO"

    model_config = SettingsConfigDict(env_file=".env", env_prefix="ND_", extra="ignore")

    @field_validator("tick")
    @classmethod
    def _positive_tick(cls, value: float) -> float:
        if value <= 0:
            raise ValueError(f"tick must be positive, got {value}")
        return value

    @field_validator("horizon")
    @classmethod
    def _non_negative_horizon(cls, value: float) -> float:
        if value < 0:
            raise ValueError(f"horizon must be non-negative, got {value}")
        return value

    @field_validator("jobs", "runs")
    @classmethod
    def _at_least_one(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"value must be >= 1, got {value}")
        return value


settings = Settings()
