from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .network import MlpSpec, TrainHyperparams

APPROACHES = ("nn-sgd", "nn-adam", "ga", "mcts-ga")
Approach = Literal["nn-sgd", "nn-adam", "ga", "mcts-ga", "compare"]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GaParams(_Strict):
    """Parámetros del GA canónico y de la acción genética del MCTS."""

    population_size: int = Field(default=30, ge=2)
    tournament_k: int = Field(default=3, ge=2)
    crossover_rate: float = Field(default=0.9, ge=0.0, le=1.0)
    mutation_rate: float = Field(default=0.1, ge=0.0, le=1.0)
    generations: int = Field(default=200, ge=1)
    mutation_mode: Literal["swap_between_individuals", "swap_within_individual"] = "swap_between_individuals"
    elitism: int = Field(default=1, ge=0)
    log_every: int = Field(default=20, ge=1)
    seed: Optional[int] = None

    @model_validator(mode="after")
    def _check(self) -> "GaParams":
        if self.tournament_k > self.population_size:
            raise ValueError(f"tournament_k ({self.tournament_k}) mayor que population_size ({self.population_size})")
        if self.elitism >= self.population_size:
            raise ValueError("elitism debe ser menor que population_size")
        # el intercambio entre individuos necesita al menos dos hijos no élite
        if (
            self.mutation_mode == "swap_between_individuals"
            and self.mutation_rate > 0
            and self.population_size - self.elitism < 2
        ):
            raise ValueError(
                "swap_between_individuals necesita population_size - elitism >= 2 "
                f"(population_size={self.population_size}, elitism={self.elitism})"
            )
        return self


class MctsParams(_Strict):
    """Parámetros de la búsqueda MCTS-GA y del rollout (mu+lambda)-ES."""

    tree_depth_max: int = Field(default=20, ge=1)
    branching_factor: int = Field(default=5, ge=1)
    rollout_generations: int = Field(default=10, ge=1)
    exploration_c: float = Field(default=2.0, gt=0.0)
    uct_mode: Literal["mean_exploit", "literal_cumulative"] = "mean_exploit"
    es_mu: int = Field(default=5, ge=1)
    es_lambda: int = Field(default=10, ge=1)
    es_sigma: float = Field(default=0.1, ge=0.0)
    iteration_budget: int = Field(default=200, ge=1)
    seed: Optional[int] = None


class GenomeParams(_Strict):
    """Semilla de la población inicial."""

    perturb_range: float = Field(default=0.5, gt=0.0)
    seed_model_path: Optional[str] = None


class DatasetParams(_Strict):
    path: str = "data/diabetes.csv"
    test_fraction: float = Field(default=0.25, gt=0.0, lt=1.0)
    balance_seed: Optional[int] = None
    split_seed: Optional[int] = None


class NetworkParams(_Strict):
    layer_sizes: List[int] = Field(default_factory=lambda: [8, 16, 8, 4, 1])
    init_seed: Optional[int] = None

    def spec(self) -> MlpSpec:
        return MlpSpec(layer_sizes=self.layer_sizes)


class TrainParams(_Strict, TrainHyperparams):
    """Hiperparámetros compartidos por nn-sgd y nn-adam; el optimizador lo fija cada enfoque."""

    seed: Optional[int] = None


class RunConfig(_Strict):
    """Configuración completa y resuelta de una ejecución."""

    seed: int = 0
    approach: Approach = "compare"
    output_dir: str = "runs"
    workers: int = Field(default=1, ge=1)
    dataset: DatasetParams = Field(default_factory=DatasetParams)
    network: NetworkParams = Field(default_factory=NetworkParams)
    train: TrainParams = Field(default_factory=TrainParams)
    genome: GenomeParams = Field(default_factory=GenomeParams)
    ga: GaParams = Field(default_factory=GaParams)
    mcts: MctsParams = Field(default_factory=MctsParams)

    def approaches(self) -> List[str]:
        return list(APPROACHES) if self.approach == "compare" else [self.approach]
