import os
import logging
from typing import Optional
from dotenv import load_dotenv

load_dotenv()


def _env_bool(name: str, default: str = "False") -> bool:
    return os.getenv(name, default).lower() in ("1", "true", "yes")


def _env_workers() -> int:
    raw = os.getenv("MCTSGA_WORKERS", "")
    if raw.strip():
        return max(1, int(raw))
    return os.cpu_count() or 1


class Settings:
    # Logging
    LOG_LEVEL: str = os.getenv("MCTSGA_LOG_LEVEL", "INFO").upper()
    LOG_FILE: Optional[str] = os.getenv("MCTSGA_LOG_FILE") or None
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Ejecución
    WORKERS: int = _env_workers()
    SHOW_PROGRESS: bool = _env_bool("MCTSGA_PROGRESS")
    OUTPUT_DIR: str = os.getenv("MCTSGA_OUTPUT_DIR", "runs")

    # Salida
    REPORT_FILE: str = "report.json"
    MCTS_STATS_FILE: str = "mcts_stats.json"

    def validate(self) -> bool:
        """Valida que la configuración de entorno sea utilizable"""
        return self.WORKERS >= 1 and self.LOG_LEVEL in logging._nameToLevel


# Global settings instance
settings = Settings()

if not settings.validate():
    raise ValueError(
        "Configuración de entorno inválida. "
        "Revisa MCTSGA_LOG_LEVEL y MCTSGA_WORKERS"
    )


# === CONFIGURACIÓN DE LOGGING ===
_logging_configurado = False


def configurar_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> logging.Logger:
    """Configura el sistema de logging (una sola vez por proceso)."""
    global _logging_configurado

    if not _logging_configurado:
        handlers = [logging.StreamHandler()]
        archivo = log_file or settings.LOG_FILE
        if archivo:
            handlers.append(logging.FileHandler(archivo))

        logging.basicConfig(
            level=getattr(logging, (level or settings.LOG_LEVEL).upper(), logging.INFO),
            format=settings.LOG_FORMAT,
            handlers=handlers,
        )
        _logging_configurado = True
    elif level:
        logging.getLogger().setLevel(level.upper())

    return logging.getLogger("mctsga")
