"""End-to-end runs: one image plus concept masks in, explanation out.

A run resolves the target class (argmax unless given), optionally distills
the model into a per-input surrogate, estimates attribution values, selects
the positive-value subset, and packages everything into a report-ready
Explanation.  The ``timings`` block holds operation counters rather than
wall-clock times, so reports stay byte-identical across machines.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .bundle import ModelBundle, predict
from .concepts import ConceptSet
from .curves import Curve, auc, deletion_curve, insertion_curve
from .explain import Explanation, rank_concepts, select_explanation
from .masking import FILL_MODES, BaselineFill
from .shapley import (
    DirectUtility,
    ShapleyResult,
    SurrogateUtility,
    exact_shapley,
    mc_shapley,
)
from .surrogate import (
    MODES,
    PieConfig,
    Surrogate,
    TrainReport,
    sample_dataset,
    train_surrogate,
)

RUN_MODES = MODES + ("direct",)


@dataclass(frozen=True)
class RunConfig:
    """Everything that shapes a run; serialized verbatim into the report."""

    seed: int
    mode: str = "pie"
    K: int = 1000
    exact: bool = False
    sampler: str = "size_uniform"
    num_samples: int = 1000
    hidden_width: int | None = 32
    epochs: int = 100
    batch_size: int = 128
    learning_rate: float = 1e-2
    holdout_fraction: float = 0.2
    fill_mode: str = "channel_mean"
    blur_radius: int = 5
    top_k: int | None = None

    def __post_init__(self):
        if self.mode not in RUN_MODES:
            raise ValueError(f"mode must be one of {RUN_MODES}, got {self.mode!r}")
        if self.fill_mode not in FILL_MODES:
            raise ValueError(f"fill_mode must be one of {FILL_MODES}, got {self.fill_mode!r}")
        if self.K < 2:
            raise ValueError("K must be >= 2")

    def fill(self) -> BaselineFill:
        return BaselineFill(self.fill_mode, self.blur_radius)

    def pie_config(self) -> PieConfig:
        return PieConfig(
            seed=self.seed,
            num_samples=self.num_samples,
            holdout_fraction=self.holdout_fraction,
            hidden_width=self.hidden_width,
            epochs=self.epochs,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
        )


@dataclass
class RunResult:
    explanation: Explanation
    shapley: ShapleyResult
    surrogate: Surrogate | None
    train_report: TrainReport | None


def resolve_target(
    bundle: ModelBundle, image: np.ndarray, target_class: int | None
) -> tuple[int, str]:
    probs = predict(bundle, image)
    target = int(np.argmax(probs)) if target_class is None else int(target_class)
    if not 0 <= target < bundle.num_classes:
        raise IndexError(f"target_class {target} out of range for {bundle.num_classes} classes")
    return target, bundle.labels[target]


def run_explain(
    bundle: ModelBundle,
    image: np.ndarray,
    cs: ConceptSet,
    config: RunConfig,
    target_class: int | None = None,
    image_name: str = "image",
) -> RunResult:
    """Full attribution run; deterministic given config.seed."""
    fill = config.fill()
    target, label = resolve_target(bundle, image, target_class)
    direct_calls = 1  # the target-resolution forward pass
    surrogate = None
    train_report = None
    train_steps = 0

    if config.mode == "direct":
        utility = DirectUtility(bundle, image, cs, fill, target)
    else:
        samples = sample_dataset(bundle, image, cs, fill, config.pie_config())
        dataset_bits = {t.coalition.bits for t in samples}
        direct_calls += len(dataset_bits)
        surrogate, train_report = train_surrogate(samples, bundle, config.mode, config.pie_config())
        train_steps = train_report.steps
        utility = SurrogateUtility(surrogate, target)

    if config.exact:
        result = exact_shapley(utility, cs.n)
    else:
        result = mc_shapley(utility, cs.n, num_samples=config.K, seed=config.seed,
                            sampler=config.sampler)

    if config.mode == "direct":
        direct_calls += utility.model_calls
        surrogate_evals = 0
        distinct = utility.distinct_coalitions
    else:
        surrogate_evals = utility.evaluations
        distinct = len(dataset_bits | set(utility.seen_bits))

    values = result.values
    ranking = rank_concepts(values)
    selected = select_explanation(values, top_k=config.top_k)
    shapley_rows = [
        {
            "id": i,
            "value": float(values[i]),
            "stderr": None if result.stderr is None else float(result.stderr[i]),
        }
        for i in range(cs.n)
    ]
    explanation = Explanation(
        image=image_name,
        n_concepts=cs.n,
        target_class=target,
        label=label,
        shapley=shapley_rows,
        ranking=ranking,
        selected=selected,
        mode=config.mode,
        utility_kind=result.utility_kind,
        K=None if config.exact else config.K,
        seed=config.seed,
        config=asdict(config),
        timings={
            "direct_model_calls": direct_calls,
            "surrogate_evaluations": surrogate_evals,
            "distinct_coalitions": distinct,
            "train_steps": train_steps,
        },
    )
    return RunResult(explanation, result, surrogate, train_report)


@dataclass(frozen=True)
class EvalResult:
    insertion: Curve
    deletion: Curve
    insertion_auc: float
    deletion_auc: float


def run_eval(
    bundle: ModelBundle,
    image: np.ndarray,
    cs: ConceptSet,
    ranking: list[int],
    target_class: int,
    fill: BaselineFill,
    pixel_axis: bool = False,
) -> EvalResult:
    """Insertion and deletion curves for a ranking, against the real model."""
    ins = insertion_curve(bundle, image, cs, ranking, target_class, fill, pixel_axis)
    dele = deletion_curve(bundle, image, cs, ranking, target_class, fill, pixel_axis)
    return EvalResult(ins, dele, auc(ins), auc(dele))


def run_pie_fit(
    bundle: ModelBundle,
    image: np.ndarray,
    cs: ConceptSet,
    config: RunConfig,
) -> tuple[Surrogate, TrainReport]:
    """Distillation only: sample coalitions, fit the surrogate, report the fit."""
    if config.mode == "direct":
        raise ValueError("direct mode has no surrogate to fit")
    samples = sample_dataset(bundle, image, cs, config.fill(), config.pie_config())
    return train_surrogate(samples, bundle, config.mode, config.pie_config())
