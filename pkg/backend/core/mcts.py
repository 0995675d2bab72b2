"""
Motor MCTS sobre estados generados por el GA.

Cada nodo guarda una población. Selección por UCT, expansión con la acción
genética (torneo -> cruce por capa -> mutación), rollout evolutivo
(mu+lambda)-ES que "envejece" al mejor individuo del nodo, y
retropropagación de Q y N.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from ..config import settings
from ..models.dataset import LabeledDataset
from ..models.metrics import ApproachMetrics
from ..models.network import MlpSpec
from ..models.params import GaParams, MctsParams
from .evaluator import FitnessEvaluator
from .genetic import breed_generation, holdout_report
from .genome import Genome, Population, init_population
from .seeding import derive_rng, derive_seed

logger = logging.getLogger(__name__)

INT64_MAX = (1 << 63) - 1
ROOT_ID = "r"


def tree_size(b: int, h: int) -> int:
    """Nodos de un árbol completo de factor b y altura h: (b^h - 1) / (b - 1)."""
    if b < 2 or h < 1:
        raise ValueError(f"se requiere b >= 2 y h >= 1 (b={b}, h={h})")
    # el total es >= b^(h-1): si eso ya pasa de 64 bits no hace falta calcular b^h
    if (h - 1) * math.log2(b) > 64:
        raise OverflowError(f"tree_size({b}, {h}) excede el rango de int64")
    total = (b ** h - 1) // (b - 1)
    if total > INT64_MAX:
        raise OverflowError(f"tree_size({b}, {h}) excede el rango de int64")
    return total


@dataclass(eq=False)
class SearchNode:
    population: Population
    q: float = 0.0
    n: int = 0
    depth: int = 0
    children: List["SearchNode"] = field(default_factory=list, repr=False)
    parent: Optional["SearchNode"] = field(default=None, repr=False)
    node_id: str = ROOT_ID
    rollouts: int = 0

    def iter_subtree(self):
        pila = [self]
        while pila:
            node = pila.pop()
            yield node
            pila.extend(reversed(node.children))


def uct_score(child: SearchNode, parent: SearchNode, params: MctsParams) -> float:
    """Explotación + sqrt(c ln(N_padre) / (N_hijo + 1)); hijos sin visitar -> +inf."""
    if child.n == 0:
        return math.inf
    if parent.n < 1:
        raise ValueError("el padre debe tener al menos una visita")
    exploracion = math.sqrt(params.exploration_c * math.log(parent.n) / (child.n + 1))
    if params.uct_mode == "literal_cumulative":
        return child.q + exploracion
    return child.q / child.n + exploracion


def select_path(root: SearchNode, params: MctsParams) -> List[SearchNode]:
    """Desciende por argmax UCT (empates -> menor índice) hasta una hoja o la profundidad máxima."""
    path = [root]
    node = root
    while node.children and node.depth < params.tree_depth_max:
        mejor = 0
        mejor_score = uct_score(node.children[0], node, params)
        for i, child in enumerate(node.children[1:], start=1):
            score = uct_score(child, node, params)
            if score > mejor_score:
                mejor, mejor_score = i, score
        node = node.children[mejor]
        path.append(node)
    return path


def _evaluator_for(spec: MlpSpec, train: LabeledDataset, evaluator: Optional[FitnessEvaluator]) -> FitnessEvaluator:
    return evaluator if evaluator is not None else FitnessEvaluator(spec, train)


def expand(
    leaf: SearchNode,
    spec: MlpSpec,
    train: LabeledDataset,
    ga: GaParams,
    params: MctsParams,
    rng: Optional[np.random.Generator] = None,
    evaluator: Optional[FitnessEvaluator] = None,
) -> List[SearchNode]:
    """Crea branching_factor hijos, cada uno una generación GA independiente de la población de la hoja."""
    if leaf.depth >= params.tree_depth_max:
        return []

    base_seed = params.seed if params.seed is not None else 0
    if rng is not None:
        semillas = [int(s) for s in rng.integers(INT64_MAX, size=params.branching_factor)]
    else:
        semillas = [derive_seed(base_seed, "expand", leaf.node_id, i) for i in range(params.branching_factor)]

    evaluator = _evaluator_for(spec, train, evaluator)
    poblaciones = [breed_generation(leaf.population, ga, np.random.default_rng(s)) for s in semillas]

    # Una sola tanda de evaluación para todos los hijos
    planos = [g for pop in poblaciones for g in pop.members]
    evaluados = evaluator.evaluate(planos)
    tam = len(leaf.population)

    children = []
    for i, pop in enumerate(poblaciones):
        members = tuple(evaluados[i * tam:(i + 1) * tam])
        child = SearchNode(
            population=Population(members=members, generation=pop.generation),
            depth=leaf.depth + 1,
            parent=leaf,
            node_id=f"{leaf.node_id}.{i}",
        )
        children.append(child)
    leaf.children.extend(children)
    return children


def age_individual(
    node: SearchNode,
    spec: MlpSpec,
    train: LabeledDataset,
    params: MctsParams,
    rng: Optional[np.random.Generator] = None,
    evaluator: Optional[FitnessEvaluator] = None,
) -> Tuple[float, Genome]:
    """Rollout (mu+lambda)-ES desde el mejor miembro del nodo; devuelve (recompensa, individuo envejecido)."""
    base_seed = params.seed if params.seed is not None else 0
    rng = rng if rng is not None else derive_rng(base_seed, "rollout", node.node_id, node.rollouts)
    evaluator = _evaluator_for(spec, train, evaluator)

    best_idx = node.population.best_index()
    semilla = node.population.members[best_idx]
    padres: List[Genome] = [semilla] * params.es_mu

    for _ in range(params.rollout_generations):
        elegidos = rng.integers(params.es_mu, size=params.es_lambda)
        ruido = rng.normal(0.0, params.es_sigma, size=(params.es_lambda, semilla.values.size))
        hijos = [padres[int(p)].with_values(padres[int(p)].values + r) for p, r in zip(elegidos, ruido)]
        hijos = evaluator.evaluate(hijos)
        # sort estable: ante empate sobreviven primero los padres
        union = padres + hijos
        orden = sorted(range(len(union)), key=lambda i: union[i].sort_key(), reverse=True)
        padres = [union[i] for i in orden[:params.es_mu]]

    envejecido = padres[0]
    node.rollouts += 1
    if envejecido.fitness > semilla.fitness:
        node.population = node.population.replace_member(best_idx, envejecido)
    return float(envejecido.fitness), envejecido


def rollout(
    node: SearchNode,
    spec: MlpSpec,
    train: LabeledDataset,
    params: MctsParams,
    rng: Optional[np.random.Generator] = None,
    evaluator: Optional[FitnessEvaluator] = None,
) -> float:
    """Recompensa = mejor aptitud encontrada por el rollout evolutivo."""
    reward, _ = age_individual(node, spec, train, params, rng=rng, evaluator=evaluator)
    return reward


def backpropagate(path: List[SearchNode], reward: float) -> None:
    for node in path:
        node.n += 1
        node.q += reward


@dataclass
class MctsResult:
    best: Genome
    root: SearchNode
    stats: Dict[str, object]
    history: List[Dict[str, float]]
    test_scores: np.ndarray
    metrics: ApproachMetrics


class MctsGaSearch:
    """Controlador del árbol: único dueño de los nodos; la evaluación puede ir a un pool."""

    def __init__(
        self,
        spec: MlpSpec,
        train: LabeledDataset,
        ga: GaParams,
        params: MctsParams,
        evaluator: Optional[FitnessEvaluator] = None,
        perturb_range: float = 0.5,
    ):
        self.spec = spec
        self.train = train
        self.ga = ga
        self.params = params
        self.perturb_range = perturb_range
        self.seed = params.seed if params.seed is not None else 0
        self._propio = evaluator is None
        self.evaluator = _evaluator_for(spec, train, evaluator)
        self.incumbent: Optional[Genome] = None
        self.incumbent_trace: List[float] = []

    def _offer(self, genome: Genome) -> None:
        if self.incumbent is None or genome.sort_key() > self.incumbent.sort_key():
            self.incumbent = genome

    def build_root(self, seed_genome: Genome) -> SearchNode:
        pop = init_population(seed_genome, self.ga.population_size, self.perturb_range, derive_seed(self.seed, "mcts", "init"))
        root = SearchNode(population=self.evaluator.evaluate_population(pop), depth=0, node_id=ROOT_ID)
        self._offer(root.population.best())
        return root

    def iterate(self, root: SearchNode, rng: np.random.Generator) -> Tuple[List[SearchNode], bool]:
        """Un ciclo selección -> expansión -> rollout -> retropropagación."""
        path = select_path(root, self.params)
        leaf = path[-1]
        profundidad_alcanzada = False

        if leaf.n > 0 and leaf.depth < self.params.tree_depth_max:
            children = expand(leaf, self.spec, self.train, self.ga, self.params, evaluator=self.evaluator)
            for child in children:
                self._offer(child.population.best())
            path.append(children[int(rng.integers(len(children)))])
            profundidad_alcanzada = children[0].depth >= self.params.tree_depth_max
            logger.debug(f"Expansión de {leaf.node_id}: {len(children)} hijos en profundidad {leaf.depth + 1}")

        reward, envejecido = age_individual(path[-1], self.spec, self.train, self.params, evaluator=self.evaluator)
        self._offer(envejecido)
        backpropagate(path, reward)
        self.incumbent_trace.append(float(self.incumbent.fitness))
        return path, profundidad_alcanzada

    def run(self, seed_genome: Genome, test: LabeledDataset) -> MctsResult:
        inicio = time.perf_counter()
        rng = derive_rng(self.seed, "mcts", "select")
        try:
            root = self.build_root(seed_genome)
            stop_reason = "budget_exhausted"
            iteraciones = 0

            ciclo = tqdm(range(1, self.params.iteration_budget + 1), desc="mcts-ga", disable=not settings.SHOW_PROGRESS)
            for iteracion in ciclo:
                _, alcanzada = self.iterate(root, rng)
                iteraciones = iteracion
                if iteracion % 20 == 0:
                    logger.info(f"MCTS iteración {iteracion}: incumbente {self.incumbent.fitness:.4f}")
                if alcanzada:
                    stop_reason = "depth_reached"
                    break

            nodos = list(root.iter_subtree())
            scores, metrics = holdout_report(self.incumbent, self.spec, test)
            stats = {
                "iterations": iteraciones,
                "nodes_created": len(nodos),
                "max_depth_reached": max(node.depth for node in nodos),
                "stop_reason": stop_reason,
                "root_q": root.q,
                "root_n": root.n,
                "evaluations": self.evaluator.evaluations,
                "incumbent_fitness": float(self.incumbent.fitness),
                "incumbent_trace": list(self.incumbent_trace),
                "wall_clock_seconds": time.perf_counter() - inicio,
            }
            history = [{"iteration": i + 1, "incumbent_fitness": f} for i, f in enumerate(self.incumbent_trace)]
            logger.info(
                f"MCTS-GA terminado ({stop_reason}): {iteraciones} iteraciones, {len(nodos)} nodos, "
                f"accuracy test {metrics.accuracy:.4f}"
            )
            return MctsResult(best=self.incumbent, root=root, stats=stats, history=history, test_scores=scores, metrics=metrics)
        finally:
            if self._propio:
                self.evaluator.close()


def run_mcts_ga(
    seed_genome: Genome,
    spec: MlpSpec,
    train: LabeledDataset,
    test: LabeledDataset,
    ga: GaParams,
    params: MctsParams,
    perturb_range: float = 0.5,
    evaluator: Optional[FitnessEvaluator] = None,
) -> MctsResult:
    """Búsqueda completa; devuelve el incumbente global y sus métricas de test."""
    search = MctsGaSearch(spec, train, ga, params, evaluator=evaluator, perturb_range=perturb_range)
    return search.run(seed_genome, test)
