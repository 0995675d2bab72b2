"""
Red feedforward binaria desde cero (sigmoide en todas las capas),
pérdida BCE, retropropagación y entrenadores SGD / Adam.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from ..config import settings
from ..models.dataset import LabeledDataset
from ..models.network import MlpSpec, TrainConfig
from .errors import ConfigError, NumericError, StructureError

logger = logging.getLogger(__name__)

BCE_EPSILON = 1e-12
DECISION_THRESHOLD = 0.5

LayerGrad = Tuple[np.ndarray, np.ndarray]


def sigmoid(z: np.ndarray) -> np.ndarray:
    # exp(709) es el límite antes de overflow en float64
    return 1.0 / (1.0 + np.exp(-np.clip(z, -709.0, 709.0)))


def _activations(weights: Sequence[np.ndarray], biases: Sequence[np.ndarray], X: np.ndarray) -> List[np.ndarray]:
    acts = [X]
    for w, b in zip(weights, biases):
        acts.append(sigmoid(acts[-1] @ w.T + b))
    return acts


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class MlpModel:
    """Pesos (out x in) y sesgos (out,) de cada capa para una MlpSpec."""

    spec: MlpSpec
    weights: Tuple[np.ndarray, ...]
    biases: Tuple[np.ndarray, ...]

    def __post_init__(self):
        shapes = self.spec.layer_shapes()
        if len(self.weights) != len(shapes) or len(self.biases) != len(shapes):
            raise StructureError(f"se esperaban {len(shapes)} capas")
        weights = []
        biases = []
        for i, ((out, inp), w, b) in enumerate(zip(shapes, self.weights, self.biases)):
            w = _frozen(w)
            b = _frozen(np.reshape(b, -1))
            if w.shape != (out, inp) or b.shape != (out,):
                raise StructureError(f"forma {w.shape}/{b.shape}, se esperaba {(out, inp)}/{(out,)}", label=f"L{i}")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise StructureError("parámetros no finitos", label=f"L{i}")
            weights.append(w)
            biases.append(b)
        object.__setattr__(self, "weights", tuple(weights))
        object.__setattr__(self, "biases", tuple(biases))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MlpModel):
            return NotImplemented
        return (
            self.spec == other.spec
            and all(np.array_equal(a, b) for a, b in zip(self.weights, other.weights))
            and all(np.array_equal(a, b) for a, b in zip(self.biases, other.biases))
        )

    __hash__ = None

    def parameter_count(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def activations(self, X: np.ndarray) -> List[np.ndarray]:
        """Activaciones de todas las capas, empezando por la entrada."""
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.spec.input_size:
            raise StructureError(f"entrada de dimensión {X.shape}, se esperaba (n, {self.spec.input_size})")
        return _activations(self.weights, self.biases, X)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        p = self.activations(X)[-1][:, 0]
        return np.clip(p, BCE_EPSILON, 1.0 - BCE_EPSILON)

    def predict(self, X: np.ndarray, threshold: float = DECISION_THRESHOLD) -> np.ndarray:
        return (self.predict_proba(X) >= threshold).astype(np.int64)


def init_model(spec: MlpSpec, seed: int) -> MlpModel:
    """Inicialización Glorot uniforme; sesgos en cero."""
    rng = np.random.default_rng(seed)
    weights = []
    biases = []
    for out, inp in spec.layer_shapes():
        r = np.sqrt(6.0 / (inp + out))
        weights.append(rng.uniform(-r, r, size=(out, inp)))
        biases.append(np.zeros(out))
    return MlpModel(spec=spec, weights=tuple(weights), biases=tuple(biases))


def forward(model: MlpModel, x: Sequence[float]) -> float:
    """Probabilidad de clase 1 para un único vector de entrada."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != model.spec.input_size:
        raise StructureError(f"entrada de longitud {x.shape[0]}, se esperaba {model.spec.input_size}")
    return float(model.predict_proba(x[None, :])[0])


def bce_loss(p, y):
    """-[y ln p + (1-y) ln(1-p)] con p recortado a [eps, 1-eps]."""
    p = np.clip(np.asarray(p, dtype=float), BCE_EPSILON, 1.0 - BCE_EPSILON)
    y = np.asarray(y, dtype=float)
    loss = -(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))
    return float(loss) if loss.ndim == 0 else loss


def mean_bce(model: MlpModel, X: np.ndarray, y: np.ndarray) -> float:
    return float(np.mean(bce_loss(model.predict_proba(X), y)))


def _backprop(weights: Sequence[np.ndarray], acts: List[np.ndarray], y: np.ndarray) -> List[LayerGrad]:
    n = acts[0].shape[0]
    # sigmoide + BCE: dL/dz de salida = (p - y)
    delta = (acts[-1] - y[:, None]) / n

    grads: List[LayerGrad] = [None] * len(weights)
    for layer in reversed(range(len(weights))):
        grads[layer] = (delta.T @ acts[layer], delta.sum(axis=0))
        if layer > 0:
            a = acts[layer]
            delta = (delta @ weights[layer]) * a * (1.0 - a)
    return grads


def gradients(model: MlpModel, X: np.ndarray, y: np.ndarray) -> List[LayerGrad]:
    """Gradiente exacto de la BCE media del lote: [(dW, db), ...] por capa."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if X.shape[0] == 0:
        raise ValueError("el lote no puede estar vacío")
    return _backprop(model.weights, model.activations(X), y)


class _Adam:
    def __init__(self, params: List[np.ndarray], cfg: TrainConfig):
        self.cfg = cfg
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, params: List[np.ndarray], grads: List[np.ndarray]) -> None:
        cfg = self.cfg
        self.t += 1
        correccion1 = 1.0 - cfg.adam_beta1 ** self.t
        correccion2 = 1.0 - cfg.adam_beta2 ** self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= cfg.adam_beta1
            m += (1.0 - cfg.adam_beta1) * g
            v *= cfg.adam_beta2
            v += (1.0 - cfg.adam_beta2) * g * g
            m_hat = m / correccion1
            v_hat = v / correccion2
            p -= cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.adam_epsilon)


def _sgd_step(params: List[np.ndarray], grads: List[np.ndarray], lr: float) -> None:
    for p, g in zip(params, grads):
        p -= lr * g


def train(model: MlpModel, data: LabeledDataset, cfg: TrainConfig) -> Tuple[MlpModel, List[float]]:
    """Entrenamiento por mini-lotes; devuelve el modelo final y la pérdida media por época."""
    n = len(data)
    if cfg.batch_size > n:
        raise ConfigError(f"batch_size {cfg.batch_size} mayor que el dataset ({n} filas)")
    if data.n_features != model.spec.input_size:
        raise StructureError(f"el dataset tiene {data.n_features} features y la red espera {model.spec.input_size}")

    rng = np.random.default_rng(cfg.seed)
    weights = [np.array(w) for w in model.weights]
    biases = [np.array(b) for b in model.biases]
    params = [p for pair in zip(weights, biases) for p in pair]
    adam = _Adam(params, cfg) if cfg.optimizer == "adam" else None

    history: List[float] = []
    epochs = tqdm(range(cfg.epochs), desc=f"train-{cfg.optimizer}", disable=not settings.SHOW_PROGRESS)
    for epoch in epochs:
        orden = rng.permutation(n)
        total = 0.0
        for start in range(0, n, cfg.batch_size):
            idx = orden[start:start + cfg.batch_size]
            X, y = data.features[idx], data.labels[idx].astype(float)
            acts = _activations(weights, biases, X)
            total += float(np.sum(bce_loss(acts[-1][:, 0], y)))
            grads = [g for pair in _backprop(weights, acts, y) for g in pair]
            if adam is not None:
                adam.step(params, grads)
            else:
                _sgd_step(params, grads, cfg.learning_rate)

        loss = total / n
        if not np.isfinite(loss) or not all(np.all(np.isfinite(p)) for p in params):
            raise NumericError(f"pérdida no finita ({loss})", epoch=epoch)
        history.append(loss)

    logger.info(f"Entrenamiento {cfg.optimizer} terminado: {cfg.epochs} épocas, pérdida final {history[-1]:.4f}")
    return MlpModel(spec=model.spec, weights=tuple(weights), biases=tuple(biases)), history
