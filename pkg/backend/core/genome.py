"""
Codec entre los parámetros de MlpModel y el individuo etiquetado por capa
sobre el que operan el GA y el MCTS.

Orden de cada segmento: matriz de pesos aplanada fila por fila (row-major)
seguida de los sesgos de la capa. Etiquetas "L0", "L1", ... en orden de capa.
"""

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..models.network import MlpSpec
from .errors import StructureError
from .network import MlpModel


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=float, copy=True).reshape(-1)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class Genome:
    """Vector plano de parámetros con la estructura (etiqueta, longitud) de cada capa."""

    labels: Tuple[str, ...]
    lengths: Tuple[int, ...]
    values: np.ndarray
    fitness: Optional[float] = None
    loss: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "lengths", tuple(int(n) for n in self.lengths))
        object.__setattr__(self, "values", _frozen(self.values))
        if len(self.labels) != len(self.lengths):
            raise StructureError("cantidad de etiquetas y de segmentos distinta")
        if self.values.shape[0] != sum(self.lengths):
            raise StructureError(f"{self.values.shape[0]} valores para segmentos que suman {sum(self.lengths)}")
        if not np.all(np.isfinite(self.values)):
            raise StructureError("el genoma contiene valores no finitos")

    @classmethod
    def from_segments(cls, segments: Sequence[Tuple[str, Sequence[float]]]) -> "Genome":
        labels = [label for label, _ in segments]
        arrays = [np.asarray(values, dtype=float).reshape(-1) for _, values in segments]
        values = np.concatenate(arrays) if arrays else np.empty(0)
        return cls(labels=tuple(labels), lengths=tuple(a.size for a in arrays), values=values)

    @property
    def offsets(self) -> List[int]:
        return [0] + list(np.cumsum(self.lengths))

    def segment(self, index: int) -> np.ndarray:
        start = self.offsets[index]
        return self.values[start:start + self.lengths[index]]

    @property
    def evaluated(self) -> bool:
        return self.fitness is not None

    def same_structure(self, other: "Genome") -> bool:
        return self.labels == other.labels and self.lengths == other.lengths

    def with_values(self, values: np.ndarray) -> "Genome":
        """Nuevo genoma con la misma estructura; la aptitud se descarta."""
        return Genome(labels=self.labels, lengths=self.lengths, values=values)

    def with_fitness(self, fitness: float, loss: Optional[float] = None) -> "Genome":
        return replace(self, fitness=float(fitness), loss=None if loss is None else float(loss))

    def sort_key(self) -> Tuple[float, float]:
        """Mayor es mejor: aptitud y luego -BCE como desempate."""
        if self.fitness is None:
            raise StructureError("genoma sin evaluar")
        return (self.fitness, -self.loss if self.loss is not None else float("-inf"))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Genome):
            return NotImplemented
        return self.same_structure(other) and np.array_equal(self.values, other.values)

    __hash__ = None


@dataclass(frozen=True)
class Population:
    """Miembros (misma estructura) y número de generación."""

    members: Tuple[Genome, ...]
    generation: int = 0

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise StructureError("la población no puede estar vacía")
        if self.generation < 0:
            raise StructureError("la generación debe ser >= 0")
        first = self.members[0]
        for i, member in enumerate(self.members[1:], start=1):
            if not member.same_structure(first):
                raise StructureError(f"el miembro {i} no comparte la estructura de la población")

    def __len__(self) -> int:
        return len(self.members)

    @property
    def evaluated(self) -> bool:
        return all(m.evaluated for m in self.members)

    def best_index(self) -> int:
        """Índice del mejor miembro (empates -> menor índice)."""
        mejor = 0
        for i, member in enumerate(self.members[1:], start=1):
            if member.sort_key() > self.members[mejor].sort_key():
                mejor = i
        return mejor

    def best(self) -> Genome:
        return self.members[self.best_index()]

    def mean_fitness(self) -> float:
        return float(np.mean([m.fitness for m in self.members]))

    def value_matrix(self) -> np.ndarray:
        return np.stack([m.values for m in self.members])

    def replace_member(self, index: int, genome: Genome) -> "Population":
        members = list(self.members)
        members[index] = genome
        return Population(members=tuple(members), generation=self.generation)


def encode(model: MlpModel) -> Genome:
    """Un segmento por capa: pesos row-major y luego sesgos."""
    segments = []
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        segments.append((f"L{i}", np.concatenate([w.reshape(-1), b])))
    return Genome.from_segments(segments)


def decode(g: Genome, spec: MlpSpec) -> MlpModel:
    """Inversa exacta de encode."""
    shapes = spec.layer_shapes()
    if len(g.lengths) != len(shapes):
        raise StructureError(f"el genoma tiene {len(g.lengths)} segmentos y la arquitectura {len(shapes)} capas")

    weights = []
    biases = []
    for i, (out, inp) in enumerate(shapes):
        esperado = out * inp + out
        if g.lengths[i] != esperado:
            raise StructureError(f"longitud {g.lengths[i]}, se esperaba {esperado}", label=g.labels[i])
        segment = g.segment(i)
        weights.append(segment[:out * inp].reshape(out, inp))
        biases.append(segment[out * inp:])
    return MlpModel(spec=spec, weights=tuple(weights), biases=tuple(biases))


def init_population(seed_genome: Genome, size: int, perturb_range: float, seed: int) -> Population:
    """Población inicial: semilla + ruido uniforme en [-r, r] por valor."""
    if size < 2:
        raise StructureError("la población necesita al menos 2 miembros")
    if perturb_range <= 0:
        raise StructureError("perturb_range debe ser > 0")

    rng = np.random.default_rng(seed)
    ruido = rng.uniform(-perturb_range, perturb_range, size=(size, seed_genome.values.size))
    members = tuple(seed_genome.with_values(seed_genome.values + fila) for fila in ruido)
    return Population(members=members, generation=0)
