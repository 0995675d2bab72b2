from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ConfusionMatrix(BaseModel):
    """Conteos tp / fp / fn / tn con predicción = score >= umbral."""

    model_config = ConfigDict(frozen=True)

    tp: int = Field(ge=0)
    fp: int = Field(ge=0)
    fn: int = Field(ge=0)
    tn: int = Field(ge=0)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def positives(self) -> int:
        return self.tp + self.fn


class ApproachMetrics(BaseModel):
    """Métricas de test de un enfoque (una columna de la tabla de resultados)."""

    accuracy: float
    recall: Optional[float] = None
    auc: Optional[float] = None
    confusion: ConfusionMatrix
    n_samples: int


class ApproachReport(BaseModel):
    approach: str
    metrics: ApproachMetrics
    train_fitness: Optional[float] = None
    wall_clock_seconds: float
    artifacts: Dict[str, str] = Field(default_factory=dict)
    extra: Dict[str, object] = Field(default_factory=dict)


class RunReport(BaseModel):
    """Documento report.json: resultados por enfoque + configuración resuelta."""

    version: str
    approaches: List[ApproachReport]
    config: Dict[str, object]
    execution: Dict[str, object] = Field(default_factory=dict)
    train_size: int
    test_size: int
    wall_clock_seconds: float

    @model_validator(mode="after")
    def _unique(self) -> "RunReport":
        nombres = [a.approach for a in self.approaches]
        if len(nombres) != len(set(nombres)):
            raise ValueError("enfoques duplicados en el reporte")
        return self
