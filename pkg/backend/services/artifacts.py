"""
Escritura de artefactos de una ejecución (JSON, CSV, modelos).

El escritor registra cada archivo creado para poder deshacer una ejecución
fallida sin dejar resultados parciales en el directorio de salida.
"""

import json
import logging
import os
from typing import Dict, List, Optional, Sequence

import pandas as pd
from pydantic import BaseModel

from ..core.genome import Genome
from ..core.model_io import save_genome, save_model
from ..core.network import MlpModel
from ..models.network import MlpSpec

logger = logging.getLogger(__name__)


class ArtifactWriter:
    """Escribe artefactos bajo `output_dir` y recuerda qué archivos creó."""

    def __init__(self, output_dir: str):
        self.output_dir = output_dir
        self.written: List[str] = []
        self._creo_directorio = False

    def path(self, name: str) -> str:
        return os.path.join(self.output_dir, name)

    def _prepare(self, name: str) -> str:
        if not os.path.isdir(self.output_dir):
            os.makedirs(self.output_dir, exist_ok=True)
            self._creo_directorio = True
        destino = self.path(name)
        if destino not in self.written:
            self.written.append(destino)
        return destino

    def write_json(self, name: str, data) -> str:
        destino = self._prepare(name)
        if isinstance(data, BaseModel):
            data = data.model_dump(mode="json")
        with open(destino, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, ensure_ascii=False)
            f.write("\n")
        return destino

    def write_csv(self, name: str, rows: Sequence, columns: Optional[List[str]] = None) -> str:
        destino = self._prepare(name)
        pd.DataFrame(list(rows), columns=columns).to_csv(destino, index=False)
        return destino

    def write_frame(self, name: str, frame: pd.DataFrame) -> str:
        destino = self._prepare(name)
        frame.to_csv(destino, index=False)
        return destino

    def write_model(self, name: str, model: MlpModel) -> str:
        return save_model(model, self._prepare(name))

    def write_genome(self, name: str, genome: Genome, spec: MlpSpec) -> str:
        return save_genome(genome, spec, self._prepare(name))

    def discard(self) -> None:
        """Elimina todo lo escrito por esta instancia."""
        for destino in reversed(self.written):
            try:
                os.remove(destino)
            except FileNotFoundError:
                pass
            except OSError as e:
                logger.warning(f"No se pudo eliminar {destino}: {e}")
        self.written.clear()
        if self._creo_directorio:
            try:
                os.rmdir(self.output_dir)
            except OSError:
                pass
        logger.warning(f"Artefactos parciales eliminados de {self.output_dir}")
