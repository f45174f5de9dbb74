import os

from dotenv import load_dotenv
from pydantic import BaseModel, field_validator

load_dotenv()

# Defaults for the verification suites; every value can be overridden on the command line
PRIME = int(os.getenv("IWASAWA_PRIME", "5"))
PRECISION = int(os.getenv("IWASAWA_PRECISION", "4"))
DEGREE = int(os.getenv("IWASAWA_DEGREE", "5"))
SEED = int(os.getenv("IWASAWA_SEED", "0"))
LOG_LEVEL = os.getenv("IWASAWA_LOG_LEVEL", "WARNING")
GUARD_SLACK = int(os.getenv("IWASAWA_GUARD_SLACK", "2"))


class Settings(BaseModel):
    prime: int = PRIME
    precision: int = PRECISION
    degree: int = DEGREE
    seed: int = SEED
    log_level: str = LOG_LEVEL
    guard_slack: int = GUARD_SLACK

    @field_validator("prime")
    @classmethod
    def odd_prime(cls, value: int) -> int:
        if value < 3 or any(value % d == 0 for d in range(2, int(value**0.5) + 1)):
            raise ValueError(f"{value} is not an odd prime (the case p=2 is excluded)")
        return value

    @field_validator("precision", "degree")
    @classmethod
    def positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be a positive integer")
        return value

    @field_validator("guard_slack")
    @classmethod
    def non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError("must be non-negative")
        return value

    @field_validator("log_level")
    @classmethod
    def known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {value}")
        return value


def get_settings(**overrides) -> Settings:
    """Configured defaults with the non-None overrides applied."""
    return Settings(**{key: value for key, value in overrides.items() if value is not None})
