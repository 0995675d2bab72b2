#!/usr/bin/env python3
"""
Tests del motor MCTS-GA: tamaño del árbol, UCT, selección, expansión,
rollout evolutivo, retropropagación y la búsqueda completa.
"""
import math
import sys

import numpy as np
import pytest

from conftest import ejecutar_pruebas, synthetic_labeled
from backend.core.evaluator import FitnessEvaluator
from backend.core.genome import Genome, Population, encode, init_population
from backend.core.mcts import (
    SearchNode,
    age_individual,
    backpropagate,
    expand,
    rollout,
    run_mcts_ga,
    select_path,
    tree_size,
    uct_score,
)
from backend.core.network import init_model
from backend.models.network import MlpSpec
from backend.models.params import GaParams, MctsParams

SPEC = MlpSpec(layer_sizes=[8, 4, 1])
GA = GaParams(population_size=6, tournament_k=2, crossover_rate=0.9, mutation_rate=0.5)


def _params(**kwargs):
    base = dict(tree_depth_max=3, branching_factor=2, rollout_generations=2, es_mu=2, es_lambda=4, iteration_budget=20, seed=1)
    base.update(kwargs)
    return MctsParams(**base)


def _nodo_evaluado(train, seed=0, depth=0):
    pop = init_population(encode(init_model(SPEC, seed=seed)), GA.population_size, 0.5, seed=seed)
    with FitnessEvaluator(SPEC, train) as evaluator:
        return SearchNode(population=evaluator.evaluate_population(pop), depth=depth)


def _nodo_vacio(q=0.0, n=0):
    g = Genome.from_segments([("L0", [0.0])]).with_fitness(0.5)
    return SearchNode(population=Population(members=(g, g)), q=q, n=n)


def test_tree_size_valores_conocidos():
    assert tree_size(10, 10) == 1_111_111_111
    assert tree_size(2, 1) == 1
    assert tree_size(3, 4) == 40


def test_tree_size_contra_suma_por_niveles():
    for b in range(2, 7):
        for h in range(1, 9):
            assert tree_size(b, h) == sum(b ** nivel for nivel in range(h))


def test_tree_size_desborde_y_argumentos_invalidos():
    assert tree_size(2, 63) == (1 << 63) - 1
    with pytest.raises(OverflowError):
        tree_size(2, 64)
    assert tree_size(3, 40) == (3 ** 40 - 1) // 2
    with pytest.raises(OverflowError):
        tree_size(3, 41)
    with pytest.raises(ValueError):
        tree_size(1, 5)
    with pytest.raises(ValueError):
        tree_size(3, 0)


def test_tree_size_desborde_sin_calcular_la_potencia():
    # b^h con h tan grande no entra en memoria: se rechaza antes de calcularlo
    with pytest.raises(OverflowError):
        tree_size(10, 3_000_000)
    with pytest.raises(OverflowError):
        tree_size(2, 10 ** 12)


def test_uct_hijo_sin_visitar_es_infinito():
    padre = _nodo_vacio(n=4)
    assert uct_score(_nodo_vacio(), padre, _params()) == math.inf


def test_uct_valor_calculado_a_mano():
    padre = _nodo_vacio(q=6.0, n=10)
    hijo = _nodo_vacio(q=2.1, n=3)
    params = _params(exploration_c=2.0)
    assert uct_score(hijo, padre, params) == pytest.approx(0.7 + math.sqrt(2 * math.log(10) / 4), abs=1e-12)
    assert uct_score(hijo, padre, params) == pytest.approx(1.77299, abs=1e-5)
    literal = _params(exploration_c=2.0, uct_mode="literal_cumulative")
    assert uct_score(hijo, padre, literal) == pytest.approx(2.1 + math.sqrt(2 * math.log(10) / 4), abs=1e-12)


def test_uct_literal_en_cinco_casos():
    casos = [(2.0, 10, 3, 2.1), (1.0, 5, 1, 0.4), (0.5, 100, 20, 13.7), (3.0, 2, 1, 1.0), (2.0, 1, 4, 3.2)]
    for c, n_padre, n_hijo, q in casos:
        params = _params(exploration_c=c, uct_mode="literal_cumulative")
        esperado = q + math.sqrt(c * math.log(n_padre) / (n_hijo + 1))
        assert abs(uct_score(_nodo_vacio(q=q, n=n_hijo), _nodo_vacio(n=n_padre), params) - esperado) <= 1e-12


def test_uct_padre_con_una_visita_solo_explota():
    padre = _nodo_vacio(q=0.5, n=1)
    hijo = _nodo_vacio(q=0.6, n=1)
    assert uct_score(hijo, padre, _params()) == pytest.approx(0.6)


def test_select_path_raiz_sin_hijos():
    root = _nodo_vacio()
    assert select_path(root, _params()) == [root]


def test_select_path_prefiere_hijo_sin_visitar():
    root = _nodo_vacio(q=1.0, n=2)
    visitado = _nodo_vacio(q=0.9, n=2)
    nuevo = _nodo_vacio()
    for hijo in (visitado, nuevo):
        hijo.parent, hijo.depth = root, 1
        root.children.append(hijo)
    path = select_path(root, _params())
    assert path == [root, nuevo]


def test_select_path_invariante_a_desplazar_recompensas():
    params = _params()
    root = _nodo_vacio(q=3.0, n=12)
    for q, n in ((1.0, 3), (2.4, 4), (2.0, 5)):
        hijo = _nodo_vacio(q=q, n=n)
        hijo.parent, hijo.depth = root, 1
        root.children.append(hijo)
    elegido = select_path(root, params)[1]
    for hijo in root.children:
        hijo.q += 0.25 * hijo.n
    assert select_path(root, params)[1] is elegido


def test_select_path_respeta_la_profundidad_maxima():
    params = _params(tree_depth_max=1)
    root = _nodo_vacio(n=1)
    hijo = _nodo_vacio(n=1)
    nieto = _nodo_vacio()
    hijo.parent, hijo.depth = root, 1
    nieto.parent, nieto.depth = hijo, 2
    root.children.append(hijo)
    hijo.children.append(nieto)
    assert select_path(root, params) == [root, hijo]


def test_expand_crea_branching_factor_hijos():
    train = synthetic_labeled(n=30)
    leaf = _nodo_evaluado(train)
    children = expand(leaf, SPEC, train, GA, _params(branching_factor=5, tree_depth_max=20))
    assert len(children) == 5
    assert leaf.children == children
    distintos = {tuple(np.concatenate([m.values for m in c.population.members])) for c in children}
    assert len(distintos) >= 2
    for i, child in enumerate(children):
        assert child.depth == 1 and child.parent is leaf
        assert child.node_id == f"r.{i}"
        assert child.population.evaluated
        assert len(child.population) == len(leaf.population)
        assert all(m.same_structure(leaf.population.members[0]) for m in child.population.members)


def test_expand_en_la_profundidad_maxima_no_hace_nada():
    train = synthetic_labeled(n=30)
    leaf = _nodo_evaluado(train, depth=3)
    assert expand(leaf, SPEC, train, GA, _params(tree_depth_max=3)) == []
    assert leaf.children == []


def test_rollout_sin_perturbacion_no_reemplaza():
    train = synthetic_labeled(n=30, seed=1)
    node = _nodo_evaluado(train, seed=2)
    antes = node.population
    reward = rollout(node, SPEC, train, _params(rollout_generations=1, es_sigma=0.0))
    assert reward == antes.best().fitness
    assert node.population is antes
    assert node.rollouts == 1


def test_rollout_nunca_empeora_al_mejor():
    train = synthetic_labeled(n=30, seed=3)
    base = _nodo_evaluado(train, seed=0)
    for seed in range(100):
        node = SearchNode(population=base.population, node_id=f"r.{seed}")
        mejor_antes = node.population.best().fitness
        reward, envejecido = age_individual(node, SPEC, train, _params(rollout_generations=3, es_sigma=0.3, seed=seed))
        assert reward >= mejor_antes
        assert node.population.best().fitness == max(mejor_antes, reward)
        assert envejecido.fitness == reward


def test_backpropagate():
    root = _nodo_vacio()
    backpropagate([root], 0.7)
    assert (root.q, root.n) == (0.7, 1)
    hijo = _nodo_vacio()
    for _ in range(4):
        backpropagate([root, hijo], 0.0)
    assert root.n == 5 and root.q == 0.7
    assert hijo.n == 4 and hijo.q == 0.0


def test_run_con_una_iteracion():
    train, test = synthetic_labeled(n=30, seed=4), synthetic_labeled(n=16, seed=5)
    result = run_mcts_ga(encode(init_model(SPEC, seed=0)), SPEC, train, test, GA, _params(iteration_budget=1))
    assert result.root.n == 1
    assert result.stats["iterations"] == 1
    assert result.stats["stop_reason"] == "budget_exhausted"
    assert len(result.history) == 1


def test_run_conservacion_de_visitas_y_cotas():
    train, test = synthetic_labeled(n=30, seed=6), synthetic_labeled(n=16, seed=7)
    params = _params(branching_factor=2, tree_depth_max=3, iteration_budget=20)
    result = run_mcts_ga(encode(init_model(SPEC, seed=1)), SPEC, train, test, GA, params)
    root, stats = result.root, result.stats

    assert root.n == stats["iterations"]
    nodos = list(root.iter_subtree())
    assert stats["nodes_created"] == len(nodos)
    for node in nodos:
        assert node.n == sum(c.n for c in node.children) + node.rollouts
        assert node.depth <= params.tree_depth_max
        if node.n:
            assert 0.0 <= node.q / node.n <= 1.0
        for child in node.children:
            assert child.depth == node.depth + 1 and child.parent is node
    assert len(nodos) <= tree_size(params.branching_factor, stats["max_depth_reached"] + 1)
    if stats["stop_reason"] == "depth_reached":
        assert stats["max_depth_reached"] == params.tree_depth_max


def test_run_se_detiene_al_alcanzar_la_profundidad_maxima():
    # 1: rollout de la raíz; 2: expande la raíz; 3: visita el otro hijo; 4: expande a profundidad 2
    train, test = synthetic_labeled(n=30, seed=12), synthetic_labeled(n=16, seed=13)
    for modo in ("mean_exploit", "literal_cumulative"):
        params = _params(branching_factor=2, tree_depth_max=2, iteration_budget=50, uct_mode=modo)
        result = run_mcts_ga(encode(init_model(SPEC, seed=4)), SPEC, train, test, GA, params)
        assert result.stats["stop_reason"] == "depth_reached"
        assert result.stats["max_depth_reached"] == params.tree_depth_max
        assert result.stats["iterations"] == 4
        assert result.root.n == 4
        assert result.stats["nodes_created"] == 1 + 2 + 2


def test_run_incumbente_no_decrece_y_es_el_mejor():
    train, test = synthetic_labeled(n=30, seed=8), synthetic_labeled(n=16, seed=9)
    result = run_mcts_ga(encode(init_model(SPEC, seed=2)), SPEC, train, test, GA, _params(tree_depth_max=4))
    traza = result.stats["incumbent_trace"]
    assert all(b >= a for a, b in zip(traza, traza[1:]))
    assert result.best.fitness == traza[-1]
    for node in result.root.iter_subtree():
        assert node.population.best().fitness <= result.best.fitness


def test_run_determinista_y_sin_depender_de_los_workers():
    train, test = synthetic_labeled(n=30, seed=10), synthetic_labeled(n=16, seed=11)
    seed_genome = encode(init_model(SPEC, seed=3))
    params = _params(iteration_budget=12, tree_depth_max=4)

    def _resumen(result):
        forma = [(n.node_id, n.n, n.q, n.rollouts) for n in result.root.iter_subtree()]
        stats = {k: v for k, v in result.stats.items() if k != "wall_clock_seconds"}
        return forma, stats, result.best.values.tolist()

    a = run_mcts_ga(seed_genome, SPEC, train, test, GA, params)
    b = run_mcts_ga(seed_genome, SPEC, train, test, GA, params)
    with FitnessEvaluator(SPEC, train, workers=2) as evaluator:
        c = run_mcts_ga(seed_genome, SPEC, train, test, GA, params, evaluator=evaluator)
    assert _resumen(a) == _resumen(b)
    assert _resumen(a)[0] == _resumen(c)[0]
    assert _resumen(a)[2] == _resumen(c)[2]


if __name__ == "__main__":
    sys.exit(ejecutar_pruebas(globals()))
