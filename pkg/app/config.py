from typing import Optional
from pydantic import AliasChoices, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    app_name: str = "TacShade"
    environment: str = Field(
        default="development",
        validation_alias=AliasChoices("ENV", "ENVIRONMENT"),
    )
    log_level: str = Field(default="INFO", validation_alias="LOG_LEVEL")
    threads: int = Field(
        default=1,
        validation_alias=AliasChoices("TACSHADE_THREADS", "THREADS"),
        description="Worker threads used when a command may run rows in parallel.",
    )
    rollbar_access_token: Optional[str] = Field(
        default=None, validation_alias="ROLLBAR_ACCESS_TOKEN"
    )  # Optional field

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="allow",  # Allow extra environment variables
        populate_by_name=True,
    )

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, v: int) -> int:
        if v < 1:
            raise ValueError("threads must be at least 1")
        return v

    @property
    def is_production(self) -> bool:
        """Check if the current environment is production."""
        return self.environment.lower() == "production"

    @property
    def is_test(self) -> bool:
        """Check if the current environment is test."""
        return self.environment.lower() == "test"


def get_settings() -> Settings:
    """Get process settings from the environment and an optional .env file."""
    return Settings()
