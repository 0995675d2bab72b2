"""
Servicio de benchmark: ejecuta los cuatro enfoques (nn-sgd, nn-adam, ga,
mcts-ga) sobre la misma partición y escribe el reporte comparativo.
"""

import json
import logging
import os
import time
from typing import Callable, Dict, List, Optional, Tuple

import pandas as pd

from .. import __version__
from ..config import settings
from ..core.dataset import prepare_dataset
from ..core.errors import ConfigError
from ..core.evaluator import FitnessEvaluator
from ..core.genetic import run_ga
from ..core.genome import Genome, encode
from ..core.mcts import run_mcts_ga
from ..core.metrics import roc_points, summarize
from ..core.model_io import load_model
from ..core.network import init_model, train
from ..core.seeding import derive_seed
from ..models.dataset import LabeledDataset
from ..models.metrics import ApproachReport, RunReport
from ..models.network import MlpSpec, TrainConfig
from ..models.params import DatasetParams, RunConfig
from .artifacts import ArtifactWriter

logger = logging.getLogger(__name__)

METRIC_ROWS = ["accuracy", "recall", "auc"]


def _names(artifacts: Dict[str, str]) -> Dict[str, str]:
    """Rutas relativas al directorio de salida (el reporte no depende de --out)."""
    return {clave: os.path.basename(ruta) for clave, ruta in artifacts.items()}


class RunContext:
    """Estado compartido por los enfoques de una ejecución (partición, semilla inicial, evaluador)."""

    def __init__(self, cfg: RunConfig, train_set: LabeledDataset, test_set: LabeledDataset, writer: ArtifactWriter):
        self.cfg = cfg
        self.spec: MlpSpec = cfg.network.spec()
        self.train = train_set
        self.test = test_set
        self.writer = writer
        self._evaluator: Optional[FitnessEvaluator] = None

        if self.spec.input_size != train_set.n_features:
            raise ConfigError(
                f"network.layer_sizes empieza en {self.spec.input_size} pero el dataset tiene {train_set.n_features} features"
            )

    @property
    def evaluator(self) -> FitnessEvaluator:
        if self._evaluator is None:
            self._evaluator = FitnessEvaluator(self.spec, self.train, workers=self.cfg.workers)
        return self._evaluator

    def close(self) -> None:
        if self._evaluator is not None:
            self._evaluator.close()
            self._evaluator = None

    def seed_genome(self) -> Genome:
        """Genoma semilla de GA y MCTS-GA: modelo cargado o inicialización Glorot."""
        ruta = self.cfg.genome.seed_model_path
        if ruta:
            model = load_model(ruta)
            if model.spec.layer_sizes != self.spec.layer_sizes:
                raise ConfigError(f"el modelo semilla {ruta} no coincide con network.layer_sizes")
            logger.info(f"Genoma semilla cargado desde {ruta}")
            return encode(model)
        return encode(init_model(self.spec, self.cfg.network.init_seed))

    def write_roc(self, approach: str, scores, labels) -> Optional[str]:
        try:
            puntos = roc_points(scores, labels)
        except ValueError as e:
            logger.warning(f"ROC omitida para {approach}: {e}")
            return None
        return self.writer.write_csv(f"roc_{approach}.csv", puntos, columns=["fpr", "tpr"])


def _run_nn(ctx: RunContext, approach: str, optimizer: str) -> ApproachReport:
    inicio = time.perf_counter()
    params = ctx.cfg.train.model_dump(exclude={"seed"})
    cfg = TrainConfig(optimizer=optimizer, seed=ctx.cfg.train.seed, **params)

    # mismo modelo inicial para ambos optimizadores
    model = init_model(ctx.spec, ctx.cfg.network.init_seed)
    model, history = train(model, ctx.train, cfg)

    scores = model.predict_proba(ctx.test.features)
    metrics = summarize(scores, ctx.test.labels)
    train_accuracy = float((model.predict(ctx.train.features) == ctx.train.labels).mean())

    artifacts = {
        "model": ctx.writer.write_model(f"model_{approach}.json", model),
        "history": ctx.writer.write_csv(
            f"history_{approach}.csv", [(i + 1, loss) for i, loss in enumerate(history)], columns=["epoch", "loss"]
        ),
    }
    roc = ctx.write_roc(approach, scores, ctx.test.labels)
    if roc:
        artifacts["roc"] = roc

    return ApproachReport(
        approach=approach,
        metrics=metrics,
        train_fitness=train_accuracy,
        wall_clock_seconds=time.perf_counter() - inicio,
        artifacts=_names(artifacts),
        extra={"optimizer": optimizer, "final_loss": history[-1], "epochs": len(history)},
    )


def run_nn_sgd(ctx: RunContext) -> ApproachReport:
    return _run_nn(ctx, "nn-sgd", "sgd")


def run_nn_adam(ctx: RunContext) -> ApproachReport:
    return _run_nn(ctx, "nn-adam", "adam")


def run_ga_approach(ctx: RunContext) -> ApproachReport:
    inicio = time.perf_counter()
    previas = ctx.evaluator.evaluations
    result = run_ga(
        ctx.seed_genome(), ctx.spec, ctx.train, ctx.test, ctx.cfg.ga,
        perturb_range=ctx.cfg.genome.perturb_range, evaluator=ctx.evaluator,
    )
    artifacts = {
        "genome": ctx.writer.write_genome("genome_ga.json", result.best, ctx.spec),
        "history": ctx.writer.write_csv(
            "history_ga.csv",
            [(h["generation"], h["best_fitness"], h["mean_fitness"]) for h in result.history],
            columns=["generation", "best_fitness", "mean_fitness"],
        ),
    }
    roc = ctx.write_roc("ga", result.test_scores, ctx.test.labels)
    if roc:
        artifacts["roc"] = roc

    return ApproachReport(
        approach="ga",
        metrics=result.metrics,
        train_fitness=result.best.fitness,
        wall_clock_seconds=time.perf_counter() - inicio,
        artifacts=_names(artifacts),
        extra={"evaluations": ctx.evaluator.evaluations - previas, "generations": ctx.cfg.ga.generations},
    )


def run_mcts_approach(ctx: RunContext) -> ApproachReport:
    inicio = time.perf_counter()
    previas = ctx.evaluator.evaluations
    result = run_mcts_ga(
        ctx.seed_genome(), ctx.spec, ctx.train, ctx.test, ctx.cfg.ga, ctx.cfg.mcts,
        perturb_range=ctx.cfg.genome.perturb_range, evaluator=ctx.evaluator,
    )
    stats = dict(result.stats)
    stats["evaluations"] = ctx.evaluator.evaluations - previas

    artifacts = {
        "genome": ctx.writer.write_genome("genome_mcts-ga.json", result.best, ctx.spec),
        "history": ctx.writer.write_csv(
            "history_mcts-ga.csv",
            [(h["iteration"], h["incumbent_fitness"]) for h in result.history],
            columns=["iteration", "incumbent_fitness"],
        ),
        "stats": ctx.writer.write_json(settings.MCTS_STATS_FILE, stats),
    }
    roc = ctx.write_roc("mcts-ga", result.test_scores, ctx.test.labels)
    if roc:
        artifacts["roc"] = roc

    resumen = {k: v for k, v in stats.items() if k not in ("incumbent_trace", "wall_clock_seconds")}
    return ApproachReport(
        approach="mcts-ga",
        metrics=result.metrics,
        train_fitness=result.best.fitness,
        wall_clock_seconds=time.perf_counter() - inicio,
        artifacts=_names(artifacts),
        extra=resumen,
    )


RUNNERS: Dict[str, Callable[[RunContext], ApproachReport]] = {
    "nn-sgd": run_nn_sgd,
    "nn-adam": run_nn_adam,
    "ga": run_ga_approach,
    "mcts-ga": run_mcts_approach,
}


def run_benchmark(cfg: RunConfig) -> Tuple[RunReport, str]:
    """Ejecuta los enfoques seleccionados y escribe report.json; ante error elimina lo escrito."""
    inicio = time.perf_counter()
    writer = ArtifactWriter(cfg.output_dir)
    ctx: Optional[RunContext] = None
    try:
        train_set, test_set = prepare_dataset(
            cfg.dataset.path, cfg.dataset.test_fraction, cfg.dataset.balance_seed, cfg.dataset.split_seed
        )
        ctx = RunContext(cfg, train_set, test_set, writer)

        reportes: List[ApproachReport] = []
        for approach in cfg.approaches():
            logger.info(f"Ejecutando enfoque {approach}")
            reporte = RUNNERS[approach](ctx)
            logger.info(f"{approach}: accuracy test {reporte.metrics.accuracy:.4f}")
            reportes.append(reporte)

        report = RunReport(
            version=__version__,
            approaches=reportes,
            config=cfg.model_dump(mode="json", exclude={"workers"}),
            execution={"workers": cfg.workers},
            train_size=len(train_set),
            test_size=len(test_set),
            wall_clock_seconds=time.perf_counter() - inicio,
        )
        path = writer.write_json(settings.REPORT_FILE, report)
        return report, path
    except BaseException:
        writer.discard()
        raise
    finally:
        if ctx is not None:
            ctx.close()


def run_prep(csv_path: str, seed: int, out_dir: str, test_fraction: Optional[float] = None) -> Dict[str, str]:
    """load -> balance -> scale -> split, y escribe train.csv, test.csv y scaler.json."""
    fraccion = test_fraction if test_fraction is not None else DatasetParams().test_fraction
    balance_seed = derive_seed(seed, "dataset", "balance")
    split_seed = derive_seed(seed, "dataset", "split")
    train_set, test_set = prepare_dataset(csv_path, fraccion, balance_seed, split_seed)

    writer = ArtifactWriter(out_dir)
    try:
        rutas = {}
        for nombre, parte in (("train", train_set), ("test", test_set)):
            frame = pd.DataFrame(parte.features, columns=list(parte.feature_names))
            frame["label"] = parte.labels
            rutas[nombre] = writer.write_frame(f"{nombre}.csv", frame)
        scaler = train_set.scaler.model_dump(mode="json")
        scaler.update({"feature_names": list(train_set.feature_names), "balance_seed": balance_seed, "split_seed": split_seed})
        rutas["scaler"] = writer.write_json("scaler.json", scaler)
    except BaseException:
        writer.discard()
        raise
    logger.info(f"Dataset preparado en {out_dir}: train={len(train_set)} test={len(test_set)}")
    return rutas


def load_report(path: str) -> RunReport:
    try:
        with open(path, encoding="utf-8") as f:
            return RunReport.model_validate(json.load(f))
    except FileNotFoundError:
        raise ConfigError(f"reporte no encontrado: {path}") from None
    except ValueError as e:
        raise ConfigError(f"reporte inválido en {path}: {e}") from None


def summary_table(report: RunReport) -> pd.DataFrame:
    """Tabla de resultados: filas accuracy / recall / auc, una columna por enfoque."""
    columnas = {
        a.approach: {"accuracy": a.metrics.accuracy, "recall": a.metrics.recall, "auc": a.metrics.auc}
        for a in report.approaches
    }
    return pd.DataFrame(columnas, index=METRIC_ROWS)


def median_table(reports: List[RunReport]) -> pd.DataFrame:
    """Mediana por enfoque y métrica sobre varios reportes (p. ej. una corrida por semilla)."""
    if not reports:
        raise ConfigError("se necesita al menos un reporte")
    apilado = pd.concat([summary_table(r).astype(float) for r in reports])
    return apilado.groupby(level=0, sort=False).median().reindex(METRIC_ROWS)
