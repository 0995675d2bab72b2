"""
Métricas de clasificación binaria: matriz de confusión, accuracy, recall,
curva ROC y AUC trapezoidal.
"""

from typing import List, Sequence, Tuple

import numpy as np
from sklearn.metrics import auc as _sk_auc
from sklearn.metrics import confusion_matrix as _sk_confusion
from sklearn.metrics import roc_curve as _sk_roc_curve

from ..models.metrics import ApproachMetrics, ConfusionMatrix
from .network import DECISION_THRESHOLD

RocPoints = List[Tuple[float, float]]


def _as_arrays(scores: Sequence[float], labels: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    scores = np.asarray(scores, dtype=float).reshape(-1)
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if scores.shape[0] != labels.shape[0]:
        raise ValueError(f"longitudes distintas: {scores.shape[0]} scores y {labels.shape[0]} etiquetas")
    if scores.shape[0] == 0:
        raise ValueError("se necesita al menos una muestra")
    return scores, labels


def confusion(scores: Sequence[float], labels: Sequence[int], threshold: float = DECISION_THRESHOLD) -> ConfusionMatrix:
    scores, labels = _as_arrays(scores, labels)
    preds = (scores >= threshold).astype(np.int64)
    tn, fp, fn, tp = _sk_confusion(labels, preds, labels=[0, 1]).ravel()
    return ConfusionMatrix(tp=int(tp), fp=int(fp), fn=int(fn), tn=int(tn))


def accuracy(cm: ConfusionMatrix) -> float:
    if cm.total == 0:
        raise ValueError("matriz de confusión vacía")
    return (cm.tp + cm.tn) / cm.total


def recall(cm: ConfusionMatrix) -> float:
    if cm.positives == 0:
        raise ValueError("recall indefinido: no hay positivos")
    return cm.tp / cm.positives


def roc_points(scores: Sequence[float], labels: Sequence[int]) -> RocPoints:
    """Puntos (fpr, tpr) barriendo los umbrales distintos en orden descendente."""
    scores, labels = _as_arrays(scores, labels)
    if np.unique(labels).size < 2:
        raise ValueError("la curva ROC requiere ambas clases")

    fpr, tpr, _ = _sk_roc_curve(labels, scores, drop_intermediate=False)
    points = [(float(x), float(y)) for x, y in zip(fpr, tpr)]
    if points[0] != (0.0, 0.0):
        points.insert(0, (0.0, 0.0))
    if points[-1] != (1.0, 1.0):
        points.append((1.0, 1.0))
    return points


def auc(points: RocPoints) -> float:
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    return float(_sk_auc(xs, ys))


def summarize(scores: Sequence[float], labels: Sequence[int], threshold: float = DECISION_THRESHOLD) -> ApproachMetrics:
    """Métricas completas de un enfoque sobre el split de test."""
    cm = confusion(scores, labels, threshold)
    ambas_clases = 0 < cm.positives < cm.total
    return ApproachMetrics(
        accuracy=accuracy(cm),
        recall=recall(cm) if cm.positives else None,
        auc=auc(roc_points(scores, labels)) if ambas_clases else None,
        confusion=cm,
        n_samples=cm.total,
    )
