from pydantic_settings import BaseSettings

class Settings(BaseSettings):
    # App
    APP_NAME: str = "KnotLens"
    ENV: str = "dev"
    LOG_LEVEL: str = "INFO"

    # Worker pool
    HOMOLOGY_THREADS: int = 4

    # Quantum window
    WINDOW_PADDING: int = 4
    MAX_WINDOW_WIDENINGS: int = 3

    # Spectral sequence
    DEFAULT_PAGE_LIMIT: int = 8

    # Skein oracle
    SKEIN_RECURSION_LIMIT: int = 200_000

    # Verification
    VERIFY_IDENTITIES: bool = True
    TRACE_ELIMINATION: bool = False

    class Config:
        env_file = ".env"

settings = Settings()
