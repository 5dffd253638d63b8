from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Logging
    LOG_LEVEL: str = Field(default="WARNING", description="loguru level for the stderr sink")
    LOG_FILE: Optional[str] = Field(default=None, description="Optional rotating log file")

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in ["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"]:
            raise ValueError(f"Unknown log level {v}")
        return level

    # Venn expansion
    E_MAX: int = Field(default=14, description="Max set variables / generators for full Venn expansion")

    # Presburger backend
    PA_MAX_BRANCHES: int = Field(default=200_000, description="Disjunct leaves explored before giving up")
    PA_MAX_NODES: int = Field(default=50_000, description="Branch-and-bound nodes per conjunct")
    PA_FLOAT_LIMIT: float = Field(default=1e12, description="Largest box bound handed to the LP relaxation")
    PA_WORKERS: int = Field(default=1, description="Threads used for top-level disjuncts")

    # Element oracle
    ORACLE_WORKERS: int = Field(default=1, description="Threads used for per-region oracle calls")
    ORACLE_CACHE_SIZE: int = Field(default=4096, description="Memo-cache entries for is_satisfiable")
    BV_DEFAULT_WIDTH: int = Field(default=8)

    # Oracles and bounds
    BRUTE_MAX_WORDS: int = Field(default=1_000_000, description="Brute-force enumeration guard")
    PARIKH_ENUM_MAX_LEN: int = Field(default=12)
    PARIKH_SIZE_CONSTANT: int = Field(default=40, description="Constant C of the linear Parikh size bound")
    SPARSITY_SCALE: int = Field(default=2, description="Leading factor of the sparsity bound")

    @field_validator(
        "E_MAX",
        "PA_MAX_BRANCHES",
        "PA_MAX_NODES",
        "PA_WORKERS",
        "ORACLE_WORKERS",
        "ORACLE_CACHE_SIZE",
        "BV_DEFAULT_WIDTH",
        "BRUTE_MAX_WORDS",
        "PARIKH_ENUM_MAX_LEN",
        "PARIKH_SIZE_CONSTANT",
        "SPARSITY_SCALE",
    )
    @classmethod
    def validate_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("Limits must be positive")
        return v

    @field_validator("PA_FLOAT_LIMIT")
    @classmethod
    def validate_float_limit(cls, v: float) -> float:
        # beyond 2**53 the relaxation can no longer tell integers apart
        if v <= 0 or v > 2 ** 53:
            raise ValueError("PA_FLOAT_LIMIT must lie in (0, 2**53]")
        return v

    model_config = SettingsConfigDict(
        env_prefix="SFASAT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )


settings = Settings()
