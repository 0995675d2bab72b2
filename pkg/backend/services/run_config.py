"""
Carga de la configuración de ejecución.

El archivo es un documento clave=valor plano (mismo formato que un .env) con
claves anidadas por puntos, por ejemplo `mcts.branching_factor = 5`.
Precedencia: flags de la CLI > archivo > variables de entorno > defaults.
"""

import logging
import os
from typing import Any, Dict, Optional

from dotenv import dotenv_values
from pydantic import ValidationError

from ..config import settings
from ..core.errors import ConfigError
from ..core.seeding import derive_seed
from ..models.params import RunConfig

logger = logging.getLogger(__name__)

_NULOS = {"", "none", "null"}


def _parse_value(raw: Optional[str]) -> Any:
    if raw is None or raw.strip().lower() in _NULOS:
        return None
    valor = raw.strip()
    if "," in valor:
        return [parte.strip() for parte in valor.split(",") if parte.strip()]
    return valor


def nest_keys(flat: Dict[str, Any]) -> Dict[str, Any]:
    """{"mcts.branching_factor": "5"} -> {"mcts": {"branching_factor": "5"}}"""
    anidado: Dict[str, Any] = {}
    for clave, valor in flat.items():
        partes = clave.strip().split(".")
        destino = anidado
        for parte in partes[:-1]:
            siguiente = destino.setdefault(parte, {})
            if not isinstance(siguiente, dict):
                raise ConfigError(f"la clave '{clave}' choca con un valor escalar")
            destino = siguiente
        destino[partes[-1]] = valor
    return anidado


def read_config_file(path: str) -> Dict[str, Any]:
    if not os.path.isfile(path):
        raise ConfigError(f"archivo de configuración no encontrado: {path}")
    valores = dotenv_values(path)
    return {clave: _parse_value(valor) for clave, valor in valores.items() if _parse_value(valor) is not None}


def resolve_seeds(cfg: RunConfig) -> RunConfig:
    """Completa las semillas de cada componente derivándolas de la semilla global."""
    seed = cfg.seed
    if cfg.dataset.balance_seed is None:
        cfg.dataset.balance_seed = derive_seed(seed, "dataset", "balance")
    if cfg.dataset.split_seed is None:
        cfg.dataset.split_seed = derive_seed(seed, "dataset", "split")
    if cfg.network.init_seed is None:
        cfg.network.init_seed = derive_seed(seed, "network", "init")
    if cfg.train.seed is None:
        cfg.train.seed = derive_seed(seed, "train")
    if cfg.ga.seed is None:
        cfg.ga.seed = derive_seed(seed, "ga")
    if cfg.mcts.seed is None:
        cfg.mcts.seed = derive_seed(seed, "mcts")
    return cfg


def load_run_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Construye la RunConfig resuelta (incluye defaults y semillas derivadas)."""
    plano: Dict[str, Any] = {
        "workers": settings.WORKERS,
        "output_dir": settings.OUTPUT_DIR,
    }
    if path:
        plano.update(read_config_file(path))
    for clave, valor in (overrides or {}).items():
        if valor is not None:
            plano[clave] = valor

    try:
        cfg = RunConfig.model_validate(nest_keys(plano))
    except ValidationError as e:
        raise ConfigError(f"configuración inválida: {e}") from None

    cfg = resolve_seeds(cfg)
    logger.info(f"Configuración resuelta: enfoque={cfg.approach} semilla={cfg.seed} workers={cfg.workers}")
    for clave, valor in dump_flat(cfg).items():
        logger.debug(f"   {clave}={valor}")
    return cfg


def dump_flat(cfg: RunConfig, exclude: Optional[set] = None) -> Dict[str, Any]:
    """Config resuelta como claves planas con puntos (formato del archivo de configuración)."""
    plano: Dict[str, Any] = {}

    def _walk(prefijo: str, valor: Any) -> None:
        if isinstance(valor, dict):
            for k, v in valor.items():
                _walk(f"{prefijo}.{k}" if prefijo else k, v)
        else:
            plano[prefijo] = valor

    _walk("", cfg.model_dump(mode="json", exclude=exclude))
    return plano
