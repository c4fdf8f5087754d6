import os

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from app.errors import ConfigError

# Load environment variables
load_dotenv()


class Settings(BaseModel):
    """
    Configuración de entorno del programa.
    """
    threads: int = Field(1, ge=1, description="Hilos de trabajo para el limitador por celdas")
    output_dir: str = Field("output", description="Directorio de salida por defecto")
    log_level: str = Field("INFO", description="Nivel de registro")


def get_settings() -> Settings:
    """Read settings from the environment (and .env)."""
    try:
        return Settings(
            threads=os.getenv("IRP_RHD_THREADS", "1"),
            output_dir=os.getenv("IRP_RHD_OUTPUT_DIR", "output"),
            log_level=os.getenv("IRP_RHD_LOG_LEVEL", "INFO").upper(),
        )
    except ValidationError as e:
        raise ConfigError(f"Invalid environment configuration: {e}")
