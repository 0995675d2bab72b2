"""
Persistencia de modelos y genomas como documento JSON:
arquitectura + parámetros planos con precisión decimal completa.
"""

import os
from typing import List, Optional

from pydantic import BaseModel, ValidationError

from ..models.network import MlpSpec
from .errors import ConfigError, StructureError
from .genome import Genome, decode, encode
from .network import MlpModel


class ModelDocument(BaseModel):
    """Formato de archivo compartido por modelos y genomas."""

    kind: str = "model"
    layer_sizes: List[int]
    activation: str = "sigmoid"
    segment_labels: List[str]
    segment_lengths: List[int]
    parameters: List[float]
    fitness: Optional[float] = None


def _document(genome: Genome, spec: MlpSpec, kind: str) -> ModelDocument:
    return ModelDocument(
        kind=kind,
        layer_sizes=spec.layer_sizes,
        activation=spec.activation,
        segment_labels=list(genome.labels),
        segment_lengths=list(genome.lengths),
        parameters=genome.values.tolist(),
        fitness=genome.fitness,
    )


def _write(doc: ModelDocument, path: str) -> str:
    with open(path, "w", encoding="utf-8") as f:
        # floats con la representación más corta que reproduce el valor exacto
        f.write(doc.model_dump_json(indent=2))
        f.write("\n")
    return path


def save_model(model: MlpModel, path: str) -> str:
    return _write(_document(encode(model), model.spec, "model"), path)


def save_genome(genome: Genome, spec: MlpSpec, path: str) -> str:
    return _write(_document(genome, spec, "genome"), path)


def _read(path: str) -> ModelDocument:
    if not os.path.isfile(path):
        raise ConfigError(f"archivo de modelo no encontrado: {path}")
    try:
        with open(path, encoding="utf-8") as f:
            return ModelDocument.model_validate_json(f.read())
    except ValidationError as e:
        raise StructureError(f"documento de modelo inválido en {path}: {e}") from None


def load_model(path: str) -> MlpModel:
    doc = _read(path)
    try:
        spec = MlpSpec(layer_sizes=doc.layer_sizes, activation=doc.activation)
    except ValidationError as e:
        raise StructureError(f"arquitectura inválida en {path}: {e}") from None
    genome = Genome(labels=tuple(doc.segment_labels), lengths=tuple(doc.segment_lengths), values=doc.parameters)
    return decode(genome, spec)
