"""
Pipeline de datos del dataset de diabetes:
carga CSV -> balanceo por submuestreo -> escalado min-max -> partición.
"""

import csv
import logging
import math
import os
from typing import List, Tuple

import numpy as np
from sklearn.model_selection import train_test_split
from sklearn.preprocessing import MinMaxScaler

from ..models.dataset import N_FEATURES, LabeledDataset, RawDataset, ScalerParams
from .errors import DatasetError

logger = logging.getLogger(__name__)

N_COLUMNS = N_FEATURES + 1


def _es_numero(valor: str) -> bool:
    try:
        float(valor)
        return True
    except ValueError:
        return False


def load_csv(path: str) -> RawDataset:
    """Carga el CSV (8 features + etiqueta final), con cabecera opcional."""
    if not os.path.isfile(path):
        raise DatasetError(f"archivo no encontrado: {path}")

    features: List[List[float]] = []
    labels: List[int] = []
    feature_names = tuple(f"f{i}" for i in range(N_FEATURES))

    with open(path, encoding="utf-8-sig", newline="") as f:  # tolera BOM
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            cells = [cell.strip() for cell in row]

            # Cabecera: primer campo no numérico en la primera línea
            if line_no == 1 and not _es_numero(cells[0]):
                if len(cells) != N_COLUMNS:
                    raise DatasetError(f"la cabecera tiene {len(cells)} columnas, se esperaban {N_COLUMNS}", line=line_no)
                feature_names = tuple(cells[:N_FEATURES])
                continue

            if len(cells) != N_COLUMNS:
                raise DatasetError(f"se esperaban {N_COLUMNS} columnas y hay {len(cells)}", line=line_no)

            try:
                valores = [float(cell) for cell in cells]
            except ValueError:
                malo = next(cell for cell in cells if not _es_numero(cell))
                raise DatasetError(f"valor no numérico '{malo}'", line=line_no) from None

            if not all(math.isfinite(v) for v in valores):
                raise DatasetError("valor no finito", line=line_no)
            if valores[-1] not in (0.0, 1.0):
                raise DatasetError(f"etiqueta inválida '{cells[-1]}' (debe ser 0 o 1)", line=line_no)

            features.append(valores[:N_FEATURES])
            labels.append(int(valores[-1]))

    if not labels:
        raise DatasetError("el archivo no tiene filas de datos")

    logger.info(f"Dataset cargado desde {path}: {len(labels)} filas")
    return RawDataset(features=np.asarray(features), labels=np.asarray(labels), feature_names=feature_names)


def balance_undersample(ds: RawDataset, seed: int) -> RawDataset:
    """Iguala las clases descartando al azar filas de la clase mayoritaria y mezcla."""
    negativos, positivos = ds.class_counts()
    if negativos == 0 or positivos == 0:
        raise DatasetError("el balanceo requiere ambas clases presentes")

    rng = np.random.default_rng(seed)
    minimo = min(negativos, positivos)
    elegidos = []
    for clase in (0, 1):
        indices = np.flatnonzero(ds.labels == clase)
        elegidos.append(rng.choice(indices, size=minimo, replace=False))
    orden = rng.permutation(np.concatenate(elegidos))

    logger.info(f"Balanceo por submuestreo: ({negativos}, {positivos}) -> ({minimo}, {minimo})")
    return RawDataset(features=ds.features[orden], labels=ds.labels[orden], feature_names=ds.feature_names)


def minmax_fit_transform(ds: RawDataset) -> LabeledDataset:
    """Escala cada columna a [0, 1]; una columna constante queda en 0.0."""
    if len(ds) == 0:
        raise DatasetError("no se puede escalar un dataset vacío")

    scaler = MinMaxScaler(feature_range=(0.0, 1.0), clip=True)
    scaled = scaler.fit_transform(ds.features)

    params = ScalerParams(mins=scaler.data_min_.tolist(), maxs=scaler.data_max_.tolist())
    return LabeledDataset(features=scaled, labels=ds.labels, scaler=params, feature_names=ds.feature_names)


def split(ds: LabeledDataset, test_fraction: float, seed: int) -> Tuple[LabeledDataset, LabeledDataset]:
    """Partición estratificada train/test con tamaño de test = round(n * fracción)."""
    if not 0.0 < test_fraction < 1.0:
        raise DatasetError(f"test_fraction debe estar en (0, 1), se recibió {test_fraction}")

    n = len(ds)
    n_test = int(math.floor(n * test_fraction + 0.5))
    if n_test < 1 or n - n_test < 1:
        raise DatasetError(f"la partición deja un conjunto vacío (n={n}, fracción={test_fraction})")

    indices = np.arange(n)
    negativos, positivos = ds.class_counts()
    puede_estratificar = min(negativos, positivos) >= 2 and min(n_test, n - n_test) >= 2
    estratificar = ds.labels if puede_estratificar else None
    train_idx, test_idx = train_test_split(
        indices,
        test_size=n_test,
        stratify=estratificar,
        random_state=int(seed) % (1 << 32),  # sklearn acepta semillas de 32 bits
        shuffle=True,
    )
    return ds.subset(train_idx), ds.subset(test_idx)


def prepare_dataset(path: str, test_fraction: float, balance_seed: int, split_seed: int) -> Tuple[LabeledDataset, LabeledDataset]:
    """load -> balance -> scale -> split, en el orden del pipeline."""
    raw = load_csv(path)
    balanced = balance_undersample(raw, balance_seed)
    scaled = minmax_fit_transform(balanced)
    train, test = split(scaled, test_fraction, split_seed)
    logger.info(f"Partición lista: train={len(train)} test={len(test)}")
    return train, test
