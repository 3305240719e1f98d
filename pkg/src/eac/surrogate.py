"""Per-input surrogate: a tiny coalition-to-probability model trained per image.

The surrogate maps a coalition indicator vector straight to class
probabilities, so estimating attribution values never has to render masked
images or run the full classifier after the training set is collected.

Three modes mirror the engine's ablation arms:

* ``pie``             indicator -> features via a small trainable map h, then
                      the target classifier's own FC layer, copied in and
                      frozen (parameter sharing).
* ``pie_no_sharing``  same architecture, but the FC copy trains too.
* ``linear``          plain affine map indicator -> logits.

Training minimizes soft-label cross-entropy against the target model's full
output distribution on masked images, with a self-contained Adam optimizer
(beta1=0.9, beta2=0.999, eps=1e-8) so runs are reproducible from the seed
alone, with no learning framework in the loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bundle import ModelBundle, predict, softmax
from .coalition import Coalition
from .concepts import ConceptSet
from .errors import CoalitionSizeMismatch, NonFiniteLoss
from .masking import BaselineFill, apply_coalition

MODES = ("pie", "pie_no_sharing", "linear")

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass(frozen=True)
class PieConfig:
    """Surrogate training hyperparameters; all stochastic choices derive from seed."""

    seed: int
    num_samples: int = 1000
    holdout_fraction: float = 0.2
    hidden_width: int | None = 32
    epochs: int = 100
    batch_size: int = 128
    learning_rate: float = 1e-2

    def __post_init__(self):
        if not 0.0 < self.holdout_fraction < 0.5:
            raise ValueError("holdout_fraction must be in (0, 0.5)")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")
        if self.hidden_width is not None and self.hidden_width < 1:
            raise ValueError("hidden_width must be None or >= 1")


@dataclass(frozen=True)
class TrainSample:
    coalition: Coalition
    target_dist: np.ndarray


@dataclass
class Surrogate:
    mode: str
    h_params: dict[str, np.ndarray]
    fc_weight: np.ndarray | None
    fc_bias: np.ndarray | None
    n: int
    m: int
    num_classes: int
    hidden_width: int | None = None


@dataclass
class TrainReport:
    epoch_losses: list[float]
    holdout_top1: float | None
    holdout_mean_abs_gap: float | None
    n_train: int
    n_holdout: int
    steps: int


@dataclass(frozen=True)
class FidelityReport:
    top1_agreement: float
    mean_abs_prob_gap: float


def sample_dataset(
    bundle: ModelBundle,
    image: np.ndarray,
    cs: ConceptSet,
    fill: BaselineFill,
    config: PieConfig,
) -> list[TrainSample]:
    """Draw coalition training data labeled by the target model.

    Coalition bits are independent Bernoulli(0.5); the empty and full
    coalitions are always present.  When 2**n >= num_samples the coalitions
    are distinct, otherwise repeats are allowed (the label for a repeated
    coalition is reused, not recomputed).
    """
    n = cs.n
    if config.num_samples < n + 2:
        raise ValueError(f"num_samples must be >= n + 2 = {n + 2}")
    rng = np.random.default_rng([config.seed, 0])
    want_distinct = n < 63 and (1 << n) >= config.num_samples

    label_cache: dict[int, np.ndarray] = {}

    def labeled(bits: int) -> TrainSample:
        coalition = Coalition(bits, n)
        if bits not in label_cache:
            masked = apply_coalition(image, cs, coalition, fill)
            label_cache[bits] = predict(bundle, masked)
        return TrainSample(coalition, label_cache[bits])

    full_bits = (1 << n) - 1
    samples = [labeled(0), labeled(full_bits)]
    seen = {0, full_bits}
    while len(samples) < config.num_samples:
        bits = _draw_bits(rng, n)
        if want_distinct and bits in seen:
            continue
        seen.add(bits)
        samples.append(labeled(bits))
    return samples


def _draw_bits(rng: np.random.Generator, n: int) -> int:
    bits = 0
    for i, keep in enumerate(rng.random(n) < 0.5):
        if keep:
            bits |= 1 << i
    return bits


def _init_params(
    mode: str, n: int, m: int, num_classes: int, hidden: int | None, rng: np.random.Generator
) -> dict[str, np.ndarray]:
    if mode == "linear":
        return {
            "w": rng.normal(0.0, 1.0 / np.sqrt(n), (n, num_classes)),
            "b": np.zeros(num_classes),
        }
    if hidden is None:
        return {
            "w1": rng.normal(0.0, 1.0 / np.sqrt(n), (n, m)),
            "b1": np.zeros(m),
        }
    return {
        "w1": rng.normal(0.0, np.sqrt(2.0 / n), (n, hidden)),
        "b1": np.zeros(hidden),
        "w2": rng.normal(0.0, np.sqrt(2.0 / hidden), (hidden, m)),
        "b2": np.zeros(m),
    }


def _forward_logits(s: Surrogate, x: np.ndarray) -> np.ndarray:
    """Logits for a batch of indicator rows (or one indicator vector)."""
    p = s.h_params
    if s.mode == "linear":
        return x @ p["w"] + p["b"]
    z = x @ p["w1"] + p["b1"]
    if s.hidden_width is not None:
        z = np.maximum(z, 0.0) @ p["w2"] + p["b2"]
    return z @ s.fc_weight.T + s.fc_bias


def surrogate_predict(s: Surrogate, coalition: Coalition) -> np.ndarray:
    """Class probabilities for one coalition; cost independent of image size."""
    if coalition.n != s.n:
        raise CoalitionSizeMismatch(f"coalition n={coalition.n}, surrogate n={s.n}")
    return softmax(_forward_logits(s, coalition.indicator()))


def surrogate_predict_batch(s: Surrogate, indicators: np.ndarray) -> np.ndarray:
    """Probabilities for a (B, n) batch of indicator rows."""
    if indicators.shape[1] != s.n:
        raise CoalitionSizeMismatch(f"batch width {indicators.shape[1]}, surrogate n={s.n}")
    return softmax(_forward_logits(s, indicators))


def _soft_ce(logit_rows: np.ndarray, targets: np.ndarray) -> float:
    shifted = logit_rows - logit_rows.max(axis=1, keepdims=True)
    logp = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    return float(-(targets * logp).sum(axis=1).mean())


def train_surrogate(
    samples: list[TrainSample],
    bundle: ModelBundle,
    mode: str,
    config: PieConfig,
) -> tuple[Surrogate, TrainReport]:
    """Fit the surrogate on coalition samples; deterministic given the seed.

    In ``pie`` mode the FC copies are never written after construction.
    Raises NonFiniteLoss if an epoch loss stops being finite.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if not samples:
        raise ValueError("no training samples")
    n = samples[0].coalition.n
    m = bundle.m
    num_classes = bundle.num_classes

    x_all = np.stack([t.coalition.indicator() for t in samples])
    y_all = np.stack([np.asarray(t.target_dist, dtype=np.float64) for t in samples])

    split_rng = np.random.default_rng([config.seed, 1])
    perm = split_rng.permutation(len(samples))
    n_hold = int(len(samples) * config.holdout_fraction)
    hold_idx, train_idx = perm[:n_hold], perm[n_hold:]
    if train_idx.size == 0:
        raise ValueError("holdout split left no training samples")
    x_train, y_train = x_all[train_idx], y_all[train_idx]

    init_rng = np.random.default_rng([config.seed, 2])
    hidden = config.hidden_width if mode != "linear" else None
    surr = Surrogate(
        mode=mode,
        h_params=_init_params(mode, n, m, num_classes, hidden, init_rng),
        fc_weight=None if mode == "linear" else bundle.fc_weight.copy(),
        fc_bias=None if mode == "linear" else bundle.fc_bias.copy(),
        n=n,
        m=m,
        num_classes=num_classes,
        hidden_width=hidden,
    )

    trainable = dict(surr.h_params)
    if mode == "pie_no_sharing":
        trainable["fc_w"] = surr.fc_weight
        trainable["fc_b"] = surr.fc_bias

    adam_m = {k: np.zeros_like(v) for k, v in trainable.items()}
    adam_v = {k: np.zeros_like(v) for k, v in trainable.items()}
    step = 0

    epoch_rng = np.random.default_rng([config.seed, 3])
    epoch_losses: list[float] = []
    for _ in range(config.epochs):
        order = epoch_rng.permutation(x_train.shape[0])
        batch_losses = []
        for start in range(0, order.size, config.batch_size):
            idx = order[start : start + config.batch_size]
            x, y = x_train[idx], y_train[idx]
            logit_rows = _forward_logits(surr, x)
            batch_losses.append(_soft_ce(logit_rows, y))

            g_logit = (softmax(logit_rows) - y) / x.shape[0]
            grads = _backward(surr, x, g_logit, mode)

            step += 1
            bias1 = 1.0 - ADAM_BETA1**step
            bias2 = 1.0 - ADAM_BETA2**step
            for k, g in grads.items():
                adam_m[k] = ADAM_BETA1 * adam_m[k] + (1.0 - ADAM_BETA1) * g
                adam_v[k] = ADAM_BETA2 * adam_v[k] + (1.0 - ADAM_BETA2) * g * g
                trainable[k] -= config.learning_rate * (adam_m[k] / bias1) / (
                    np.sqrt(adam_v[k] / bias2) + ADAM_EPS
                )
        epoch_loss = float(np.mean(batch_losses))
        if not np.isfinite(epoch_loss):
            raise NonFiniteLoss(f"training loss became {epoch_loss}")
        epoch_losses.append(epoch_loss)

    holdout_top1 = holdout_gap = None
    if hold_idx.size:
        probs = surrogate_predict_batch(surr, x_all[hold_idx])
        target = y_all[hold_idx]
        holdout_top1 = float((probs.argmax(1) == target.argmax(1)).mean())
        holdout_gap = float(np.abs(probs - target).mean())

    report = TrainReport(
        epoch_losses=epoch_losses,
        holdout_top1=holdout_top1,
        holdout_mean_abs_gap=holdout_gap,
        n_train=int(train_idx.size),
        n_holdout=int(hold_idx.size),
        steps=step,
    )
    return surr, report


def _backward(
    s: Surrogate, x: np.ndarray, g_logit: np.ndarray, mode: str
) -> dict[str, np.ndarray]:
    p = s.h_params
    if mode == "linear":
        return {"w": x.T @ g_logit, "b": g_logit.sum(axis=0)}

    g_feat = g_logit @ s.fc_weight
    grads: dict[str, np.ndarray] = {}
    if mode == "pie_no_sharing":
        if s.hidden_width is None:
            feat = x @ p["w1"] + p["b1"]
        else:
            feat = np.maximum(x @ p["w1"] + p["b1"], 0.0) @ p["w2"] + p["b2"]
        grads["fc_w"] = g_logit.T @ feat
        grads["fc_b"] = g_logit.sum(axis=0)

    if s.hidden_width is None:
        grads["w1"] = x.T @ g_feat
        grads["b1"] = g_feat.sum(axis=0)
    else:
        z = x @ p["w1"] + p["b1"]
        a = np.maximum(z, 0.0)
        grads["w2"] = a.T @ g_feat
        grads["b2"] = g_feat.sum(axis=0)
        g_a = g_feat @ p["w2"].T
        g_z = g_a * (z > 0.0)
        grads["w1"] = x.T @ g_z
        grads["b1"] = g_z.sum(axis=0)
    return grads


def fidelity(
    surrogate: Surrogate | Callable[[Coalition], np.ndarray],
    bundle: ModelBundle,
    image: np.ndarray,
    cs: ConceptSet,
    fill: BaselineFill,
    holdout: list[Coalition],
) -> FidelityReport:
    """Compare surrogate output against the direct model, coalition by coalition."""
    if not holdout:
        raise ValueError("holdout coalitions must be non-empty")
    if callable(surrogate) and not isinstance(surrogate, Surrogate):
        predict_fn = surrogate
    else:
        predict_fn = lambda s: surrogate_predict(surrogate, s)  # noqa: E731
    agree = 0
    gaps = []
    for s in holdout:
        sp = predict_fn(s)
        dp = predict(bundle, apply_coalition(image, cs, s, fill))
        agree += int(np.argmax(sp) == np.argmax(dp))
        gaps.append(np.abs(sp - dp).mean())
    return FidelityReport(
        top1_agreement=agree / len(holdout),
        mean_abs_prob_gap=float(np.mean(gaps)),
    )
