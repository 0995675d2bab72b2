"""
Acción genética (selección por torneo, cruce por capa, mutación por
intercambio), función de aptitud y el GA canónico de referencia.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from ..config import settings
from ..models.dataset import LabeledDataset
from ..models.metrics import ApproachMetrics
from ..models.network import MlpSpec
from ..models.params import GaParams
from .errors import StructureError
from .evaluator import FitnessEvaluator, score_genome
from .genome import Genome, Population, decode, init_population
from .metrics import summarize
from .seeding import derive_rng, derive_seed

logger = logging.getLogger(__name__)

SWAP_BETWEEN = "swap_between_individuals"
SWAP_WITHIN = "swap_within_individual"


def evaluate_genome(g: Genome, spec: MlpSpec, train: LabeledDataset) -> Genome:
    """Copia del genoma con la aptitud (y la BCE de desempate) cacheada; si ya la tiene, lo devuelve igual."""
    if g.evaluated:
        return g
    accuracy, loss = score_genome(g, spec, train.features, train.labels)
    return g.with_fitness(accuracy, loss)


def evaluate_fitness(g: Genome, spec: MlpSpec, train: LabeledDataset) -> float:
    """Accuracy de entrenamiento del modelo decodificado (umbral >= 0.5)."""
    return float(evaluate_genome(g, spec, train).fitness)


def tournament_select(pop: Population, k: int, rng: np.random.Generator) -> Genome:
    """Torneo de k miembros distintos; gana la mayor aptitud (empates -> menor índice)."""
    if k > len(pop):
        raise StructureError(f"k={k} mayor que la población ({len(pop)})")
    for i, member in enumerate(pop.members):
        if not member.evaluated:
            raise StructureError(f"miembro {i} sin evaluar en el torneo")

    candidatos = sorted(int(i) for i in rng.choice(len(pop), size=k, replace=False))
    ganador = candidatos[0]
    for i in candidatos[1:]:
        if pop.members[i].sort_key() > pop.members[ganador].sort_key():
            ganador = i
    return pop.members[ganador]


def crossover_layerwise(a: Genome, b: Genome, rng: np.random.Generator) -> Tuple[Genome, Genome]:
    """Cruce de 1 punto restringido a cada capa; segmentos de largo 1 se copian."""
    if not a.same_structure(b):
        raise StructureError("los padres no comparten estructura")

    hijo1 = np.array(a.values)
    hijo2 = np.array(b.values)
    for start, length in zip(a.offsets, a.lengths):
        if length < 2:
            continue
        corte = start + int(rng.integers(1, length))
        fin = start + length
        hijo1[corte:fin] = b.values[corte:fin]
        hijo2[corte:fin] = a.values[corte:fin]
    return a.with_values(hijo1), b.with_values(hijo2)


def mutate(pop: Population, rate: float, mode: str, rng: np.random.Generator) -> Population:
    """Por cada capa, con probabilidad `rate`, intercambia dos pesos (entre o dentro de individuos)."""
    if mode not in (SWAP_BETWEEN, SWAP_WITHIN):
        raise ValueError(f"modo de mutación desconocido: {mode}")
    n = len(pop)
    if mode == SWAP_BETWEEN and n < 2:
        raise StructureError("la mutación entre individuos requiere al menos 2 miembros")

    valores = pop.value_matrix()
    tocados = set()
    first = pop.members[0]
    for start, length in zip(first.offsets, first.lengths):
        if rng.random() >= rate:
            continue
        if mode == SWAP_BETWEEN:
            i, j = (int(x) for x in rng.choice(n, size=2, replace=False))
            pos = start + int(rng.integers(length))
            valores[i, pos], valores[j, pos] = valores[j, pos], valores[i, pos]
            tocados.update((i, j))
        else:
            i = int(rng.integers(n))
            if length < 2:
                continue
            p, q = (start + int(x) for x in rng.choice(length, size=2, replace=False))
            valores[i, p], valores[i, q] = valores[i, q], valores[i, p]
            tocados.add(i)

    members = tuple(
        m.with_values(valores[i]) if i in tocados and not np.array_equal(valores[i], m.values) else m
        for i, m in enumerate(pop.members)
    )
    return Population(members=members, generation=pop.generation)


def elite_indices(pop: Population, count: int) -> List[int]:
    orden = sorted(range(len(pop)), key=lambda i: (pop.members[i].sort_key(), -i), reverse=True)
    return orden[:count]


def breed_generation(pop: Population, params: GaParams, rng: np.random.Generator) -> Population:
    """Una generación: élite + (torneo -> cruce -> mutación poblacional). Devuelve hijos sin evaluar."""
    elites = [pop.members[i] for i in elite_indices(pop, params.elitism)]
    necesarios = len(pop) - len(elites)

    hijos: List[Genome] = []
    while len(hijos) < necesarios:
        a = tournament_select(pop, params.tournament_k, rng)
        b = tournament_select(pop, params.tournament_k, rng)
        if rng.random() < params.crossover_rate:
            a, b = crossover_layerwise(a, b, rng)
        hijos.extend((a, b))
    hijos = hijos[:necesarios]

    if len(hijos) >= 2 or params.mutation_mode == SWAP_WITHIN:
        hijos = list(mutate(Population(members=tuple(hijos)), params.mutation_rate, params.mutation_mode, rng).members)
    return Population(members=tuple(elites + hijos), generation=pop.generation + 1)


@dataclass
class GaResult:
    best: Genome
    history: List[Dict[str, float]]
    test_scores: np.ndarray
    metrics: ApproachMetrics
    evaluations: int = 0


def holdout_report(best: Genome, spec: MlpSpec, test: LabeledDataset) -> Tuple[np.ndarray, ApproachMetrics]:
    scores = decode(best, spec).predict_proba(test.features)
    return scores, summarize(scores, test.labels)


def run_ga(
    seed_genome: Genome,
    spec: MlpSpec,
    train: LabeledDataset,
    test: LabeledDataset,
    params: GaParams,
    perturb_range: float = 0.5,
    evaluator: Optional[FitnessEvaluator] = None,
) -> GaResult:
    """GA generacional con elitismo; devuelve el mejor genoma histórico por aptitud de entrenamiento."""
    seed = params.seed if params.seed is not None else 0
    rng = derive_rng(seed, "ga", "operators")
    propio = evaluator is None
    evaluator = evaluator or FitnessEvaluator(spec, train)

    try:
        pop = init_population(seed_genome, params.population_size, perturb_range, derive_seed(seed, "ga", "init"))
        pop = evaluator.evaluate_population(pop)
        best = pop.best()
        history = [{"generation": 0, "best_fitness": pop.best().fitness, "mean_fitness": pop.mean_fitness()}]

        generaciones = tqdm(range(1, params.generations + 1), desc="ga", disable=not settings.SHOW_PROGRESS)
        for generation in generaciones:
            pop = evaluator.evaluate_population(breed_generation(pop, params, rng))
            actual = pop.best()
            if actual.sort_key() > best.sort_key():
                best = actual
            history.append({"generation": generation, "best_fitness": actual.fitness, "mean_fitness": pop.mean_fitness()})
            if generation % params.log_every == 0:
                logger.info(f"GA generación {generation}: mejor {actual.fitness:.4f} media {pop.mean_fitness():.4f}")

        scores, metrics = holdout_report(best, spec, test)
        logger.info(f"GA terminado: aptitud {best.fitness:.4f}, accuracy test {metrics.accuracy:.4f}")
        return GaResult(best=best, history=history, test_scores=scores, metrics=metrics, evaluations=evaluator.evaluations)
    finally:
        if propio:
            evaluator.close()
