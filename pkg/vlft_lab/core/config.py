# vlft_lab/core/config.py
from typing import Optional

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()  # Loads .env file into environment


class Settings(BaseSettings):
    PROJECT_NAME: str = "vlft-lab"
    LOG_LEVEL: str = "INFO"

    # Worker cap for sweeps and Monte Carlo (env: VLFT_THREADS)
    THREADS: Optional[int] = None

    # xi engine
    GRID_STEP: float = 1e-4
    LATTICE_PRUNE: float = 1e-18
    ORACLE_MAX_N: int = 6
    ORACLE_MAX_TRIPLES: int = 2**21
    DENSITY_TIE_TOL: float = 1e-9

    # Tail truncation of infinite latency sums
    TAIL_THRESHOLD: float = 1e-12
    TAIL_PATIENCE: int = 10
    TAIL_MIN_TIME_FACTOR: float = 2.0
    TAIL_MAX_SYMBOLS: int = 50_000

    # Monte Carlo
    SIM_CHUNK_SIZE: int = 250
    SIM_CAP_FACTOR: float = 64.0
    SIM_CENSOR_LIMIT: float = 0.01
    SIM_MAX_ROUNDS: int = 10_000

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="VLFT_",
        case_sensitive=False,
        extra="ignore",
    )

    def worker_count(self, requested: Optional[int] = None) -> int:
        """Requested worker count, capped by VLFT_THREADS when set."""
        n = requested if requested and requested > 0 else (self.THREADS or 1)
        if self.THREADS:
            n = min(n, self.THREADS)
        return max(1, n)


settings = Settings()
