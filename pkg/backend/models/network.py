from typing import List, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

DEFAULT_LAYER_SIZES = [8, 16, 8, 4, 1]


class MlpSpec(BaseModel):
    """Arquitectura de la red: tamaños de capa, sigmoide en todas las capas."""

    model_config = ConfigDict(frozen=True)

    layer_sizes: List[int] = Field(default_factory=lambda: list(DEFAULT_LAYER_SIZES))
    activation: Literal["sigmoid"] = "sigmoid"

    @field_validator("layer_sizes")
    @classmethod
    def _check_sizes(cls, sizes: List[int]) -> List[int]:
        if len(sizes) < 2:
            raise ValueError("se necesitan al menos capa de entrada y de salida")
        if any(size < 1 for size in sizes):
            raise ValueError("todos los tamaños de capa deben ser >= 1")
        if sizes[-1] != 1:
            raise ValueError("la capa de salida debe tener 1 unidad")
        return list(sizes)

    @property
    def input_size(self) -> int:
        return self.layer_sizes[0]

    def layer_shapes(self) -> List[tuple]:
        """(out, in) de cada capa."""
        return [(out, inp) for inp, out in zip(self.layer_sizes[:-1], self.layer_sizes[1:])]

    def segment_lengths(self) -> List[int]:
        return [out * inp + out for out, inp in self.layer_shapes()]

    def parameter_count(self) -> int:
        return sum(self.segment_lengths())


class TrainHyperparams(BaseModel):
    """Hiperparámetros comunes a SGD y Adam."""

    learning_rate: float = Field(default=0.01, ge=0.0)
    epochs: int = Field(default=200, ge=1)
    batch_size: int = Field(default=10, ge=1)
    adam_beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    adam_beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    adam_epsilon: float = Field(default=1e-8, gt=0.0)


class TrainConfig(TrainHyperparams):
    """Entrenamiento por gradiente: optimizador + hiperparámetros + semilla de los minibatches."""

    optimizer: Literal["sgd", "adam"] = "adam"
    seed: int = 0
