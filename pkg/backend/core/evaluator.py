"""
Evaluación de aptitud (accuracy de entrenamiento + BCE media como desempate),
en serie o repartida en un pool de procesos.

La evaluación es una función pura del genoma y los datos: el resultado no
depende de la cantidad de workers.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence, List, Tuple

import numpy as np

from ..models.dataset import LabeledDataset
from ..models.network import MlpSpec
from .genome import Genome, Population, decode
from .network import DECISION_THRESHOLD, bce_loss

logger = logging.getLogger(__name__)

_WORKER_STATE: Optional[tuple] = None


def score_genome(genome: Genome, spec: MlpSpec, X: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    """(accuracy con umbral >= 0.5, BCE media) del modelo decodificado."""
    p = decode(genome, spec).predict_proba(X)
    accuracy = float(np.mean((p >= DECISION_THRESHOLD).astype(np.int64) == y))
    loss = float(np.mean(bce_loss(p, y)))
    return accuracy, loss


def _init_worker(labels, lengths, spec, X, y) -> None:
    global _WORKER_STATE
    _WORKER_STATE = (labels, lengths, spec, X, y)


def _score_worker(values: np.ndarray) -> Tuple[float, float]:
    labels, lengths, spec, X, y = _WORKER_STATE
    return score_genome(Genome(labels=labels, lengths=lengths, values=values), spec, X, y)


class FitnessEvaluator:
    """Evalúa genomas contra el split de entrenamiento; cachea la aptitud en el genoma."""

    def __init__(self, spec: MlpSpec, train: LabeledDataset, workers: int = 1):
        self.spec = spec
        self.train = train
        self.workers = max(1, int(workers))
        self.evaluations = 0
        self._pool: Optional[ProcessPoolExecutor] = None
        self._pool_structure: Optional[tuple] = None

    def __enter__(self) -> "FitnessEvaluator":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None
            self._pool_structure = None

    def _get_pool(self, labels, lengths) -> ProcessPoolExecutor:
        if self._pool is None or self._pool_structure != (labels, lengths):
            self.close()
            self._pool = ProcessPoolExecutor(
                max_workers=self.workers,
                initializer=_init_worker,
                initargs=(labels, lengths, self.spec, self.train.features, self.train.labels),
            )
            self._pool_structure = (labels, lengths)
            logger.info(f"Pool de evaluación iniciado con {self.workers} workers")
        return self._pool

    def evaluate(self, genomes: Sequence[Genome]) -> List[Genome]:
        """Devuelve los genomas con aptitud; los ya evaluados no se recalculan."""
        pendientes = [i for i, g in enumerate(genomes) if not g.evaluated]
        resultado = list(genomes)
        if not pendientes:
            return resultado

        if self.workers == 1 or len(pendientes) == 1:
            scores = [score_genome(genomes[i], self.spec, self.train.features, self.train.labels) for i in pendientes]
        else:
            first = genomes[pendientes[0]]
            pool = self._get_pool(first.labels, first.lengths)
            chunksize = max(1, len(pendientes) // (self.workers * 2))
            scores = list(pool.map(_score_worker, [genomes[i].values for i in pendientes], chunksize=chunksize))

        for i, (accuracy, loss) in zip(pendientes, scores):
            resultado[i] = genomes[i].with_fitness(accuracy, loss)
        self.evaluations += len(pendientes)
        return resultado

    def evaluate_population(self, pop: Population) -> Population:
        return Population(members=tuple(self.evaluate(pop.members)), generation=pop.generation)
