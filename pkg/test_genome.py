#!/usr/bin/env python3
"""
Tests del codec genoma <-> modelo y de la población inicial.
"""
import json
import sys

import numpy as np
import pytest

from conftest import ejecutar_pruebas
from backend.core.errors import StructureError
from backend.core.genome import Genome, Population, decode, encode, init_population
from backend.core.model_io import load_model, save_genome
from backend.core.network import MlpModel, forward, init_model
from backend.models.network import MlpSpec


def test_encode_longitudes_por_capa():
    g = encode(init_model(MlpSpec(), seed=0))
    assert g.labels == ("L0", "L1", "L2", "L3")
    assert g.lengths == (144, 136, 36, 5)
    assert g.values.size == 321


def test_encode_orden_pesos_luego_sesgos():
    model = MlpModel(spec=MlpSpec(layer_sizes=[2, 1]), weights=(np.array([[0.1, 0.2]]),), biases=(np.array([0.3]),))
    g = encode(model)
    assert g.labels == ("L0",)
    assert list(g.segment(0)) == [0.1, 0.2, 0.3]

    fila_mayor = MlpModel(
        spec=MlpSpec(layer_sizes=[2, 2, 1]),
        weights=(np.array([[1.0, 2.0], [3.0, 4.0]]), np.array([[5.0, 6.0]])),
        biases=(np.array([7.0, 8.0]), np.array([9.0])),
    )
    assert list(encode(fila_mayor).values) == [1, 2, 3, 4, 7, 8, 5, 6, 9]


def test_ida_y_vuelta_exacta_en_100_modelos():
    rng = np.random.default_rng(0)
    spec = MlpSpec()
    for i in range(100):
        base = init_model(spec, seed=i)
        model = MlpModel(
            spec=spec,
            weights=base.weights,
            biases=tuple(rng.normal(0, 3, size=b.shape) for b in base.biases),
        )
        g = encode(model)
        assert decode(g, spec) == model
        assert encode(decode(g, spec)) == g


def test_decode_segmento_con_longitud_incorrecta():
    spec = MlpSpec(layer_sizes=[2, 2, 1])
    g = Genome.from_segments([("L0", np.zeros(6)), ("L1", np.zeros(3))])
    assert decode(g, spec).parameter_count() == 9

    malo = Genome.from_segments([("L0", np.zeros(5)), ("L1", np.zeros(3))])
    with pytest.raises(StructureError) as info:
        decode(malo, spec)
    assert info.value.label == "L0"


def test_decode_genoma_en_cero_predice_0_5():
    spec = MlpSpec()
    ceros = Genome.from_segments([(f"L{i}", np.zeros(n)) for i, n in enumerate(spec.segment_lengths())])
    model = decode(ceros, spec)
    for x in np.random.default_rng(1).uniform(0, 1, size=(5, 8)):
        assert forward(model, x) == 0.5


def test_genoma_inmutable_y_no_finito():
    g = encode(init_model(MlpSpec(), seed=0))
    with pytest.raises(ValueError):
        g.values[0] = 1.0
    with pytest.raises(StructureError):
        Genome(labels=("L0",), lengths=(2,), values=[1.0, np.nan])


def test_init_population_ruido_acotado():
    seed_genome = encode(init_model(MlpSpec(), seed=3))
    pop = init_population(seed_genome, size=30, perturb_range=0.5, seed=7)
    assert len(pop) == 30
    assert pop.generation == 0
    assert all(m.same_structure(seed_genome) for m in pop.members)
    assert not any(m.evaluated for m in pop.members)
    diferencias = np.abs(pop.value_matrix() - seed_genome.values)
    assert diferencias.size >= 1000
    assert diferencias.max() <= 0.5


def test_init_population_rango_minimo_converge_a_la_semilla():
    seed_genome = encode(init_model(MlpSpec(layer_sizes=[3, 2, 1]), seed=0))
    pop = init_population(seed_genome, size=5, perturb_range=1e-12, seed=0)
    for member in pop.members:
        assert np.allclose(member.values, seed_genome.values, atol=1e-11)


def test_init_population_parametros_invalidos():
    seed_genome = encode(init_model(MlpSpec(layer_sizes=[2, 1]), seed=0))
    with pytest.raises(StructureError):
        init_population(seed_genome, size=1, perturb_range=0.5, seed=0)
    with pytest.raises(StructureError):
        init_population(seed_genome, size=4, perturb_range=0.0, seed=0)


def test_poblacion_exige_estructura_comun():
    a = Genome.from_segments([("L0", np.zeros(3))])
    b = Genome.from_segments([("L0", np.zeros(4))])
    with pytest.raises(StructureError):
        Population(members=(a, b))
    with pytest.raises(StructureError):
        Population(members=())


def test_mejor_miembro_desempata_por_bce_y_luego_indice():
    base = Genome.from_segments([("L0", np.zeros(3))])
    members = (
        base.with_fitness(0.8, loss=0.6),
        base.with_fitness(0.8, loss=0.4),
        base.with_fitness(0.8, loss=0.4),
        base.with_fitness(0.7, loss=0.1),
    )
    assert Population(members=members).best_index() == 1


def test_genoma_guardado_conserva_etiquetas_y_aptitud(tmp_path):
    spec = MlpSpec()
    g = encode(init_model(spec, seed=4)).with_fitness(0.75, loss=0.5)
    path = save_genome(g, spec, str(tmp_path / "genome.json"))
    with open(path, encoding="utf-8") as f:
        documento = json.load(f)
    assert documento["kind"] == "genome"
    assert documento["segment_labels"] == ["L0", "L1", "L2", "L3"]
    assert documento["fitness"] == 0.75
    assert encode(load_model(path)) == g


if __name__ == "__main__":
    sys.exit(ejecutar_pruebas(globals()))
