from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

N_FEATURES = 8


class ScalerParams(BaseModel):
    """Mínimos y máximos por columna del escalador min-max."""

    model_config = ConfigDict(frozen=True)

    mins: List[float]
    maxs: List[float]

    @model_validator(mode="after")
    def _check(self) -> "ScalerParams":
        if len(self.mins) != len(self.maxs):
            raise ValueError("mins y maxs deben tener la misma longitud")
        for i, (lo, hi) in enumerate(zip(self.mins, self.maxs)):
            if lo > hi:
                raise ValueError(f"columna {i}: min {lo} > max {hi}")
        return self

    def inverse_transform(self, features: np.ndarray) -> np.ndarray:
        mins = np.asarray(self.mins, dtype=float)
        rango = np.asarray(self.maxs, dtype=float) - mins
        return np.asarray(features, dtype=float) * rango + mins


def _read_only(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class RawDataset:
    """Filas crudas: matriz n x 8 de features y etiquetas 0/1."""

    features: np.ndarray
    labels: np.ndarray
    feature_names: Tuple[str, ...] = field(default_factory=lambda: tuple(f"f{i}" for i in range(N_FEATURES)))

    def __post_init__(self):
        features = np.asarray(self.features, dtype=float)
        if features.size == 0:
            features = features.reshape(0, N_FEATURES)
        labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        if features.ndim != 2 or features.shape[1] != N_FEATURES:
            raise ValueError(f"se esperaban {N_FEATURES} features por fila")
        if features.shape[0] != labels.shape[0]:
            raise ValueError("features y labels tienen distinta cantidad de filas")
        if not np.all(np.isfinite(features)):
            raise ValueError("hay valores no finitos en las features")
        if not np.all(np.isin(labels, (0, 1))):
            raise ValueError("las etiquetas deben ser 0 o 1")
        object.__setattr__(self, "features", _read_only(features))
        object.__setattr__(self, "labels", _read_only(labels))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    def class_counts(self) -> Tuple[int, int]:
        positivos = int(self.labels.sum())
        return len(self) - positivos, positivos


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Features escaladas a [0, 1], etiquetas y parámetros del escalador."""

    features: np.ndarray
    labels: np.ndarray
    scaler: ScalerParams
    feature_names: Tuple[str, ...] = field(default_factory=lambda: tuple(f"f{i}" for i in range(N_FEATURES)))

    def __post_init__(self):
        features = np.asarray(self.features, dtype=float)
        labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        if features.ndim != 2 or features.shape[0] == 0:
            raise ValueError("el dataset etiquetado no puede estar vacío")
        if features.shape[0] != labels.shape[0]:
            raise ValueError("features y labels tienen distinta cantidad de filas")
        if np.any(features < 0.0) or np.any(features > 1.0):
            raise ValueError("las features escaladas deben estar en [0, 1]")
        if not np.all(np.isin(labels, (0, 1))):
            raise ValueError("las etiquetas deben ser 0 o 1")
        object.__setattr__(self, "features", _read_only(features))
        object.__setattr__(self, "labels", _read_only(labels))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    def class_counts(self) -> Tuple[int, int]:
        positivos = int(self.labels.sum())
        return len(self) - positivos, positivos

    def subset(self, indices: np.ndarray) -> "LabeledDataset":
        indices = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(
            features=self.features[indices],
            labels=self.labels[indices],
            scaler=self.scaler,
            feature_names=self.feature_names,
        )
