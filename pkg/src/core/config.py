"""Application settings."""

from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict

PACKAGE_ROOT = Path(__file__).parent.parent


class Settings(BaseSettings):
    """Process-level settings, read from CLDS_* environment variables or .env."""

    model_config = SettingsConfigDict(env_prefix="CLDS_", env_file=".env", case_sensitive=True, extra="ignore")

    PROJECT_NAME: str = "CLDS Grid Scheduling Simulator"

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"

    # Outputs
    OUTPUT_DIR: str = "results"

    # Scenario presets
    PRESETS_PATH: Path = PACKAGE_ROOT / "configs" / "presets.yaml"


settings = Settings()
