"""Coalition-game attribution: exact and Monte-Carlo estimates per concept.

A coalition game here is any callable mapping a Coalition to a scalar payoff.
The attribution value of concept i averages its marginal contribution over
coalition sizes first and subsets within a size second:

    value_i = (1/n) * sum_s binom(n-1, s)^-1 * sum_{|S|=s, i not in S} delta_i(S)

with delta_i(S) = u(S with i) - u(S).  The Monte-Carlo estimator draws the
size uniformly from 0..n-1 and then a uniform subset of that size, which
reproduces those weights exactly, so the sample mean is unbiased.  A
permutation sampler is available as an alternative; it shares draws across
concepts.

Utilities are memoized per run keyed on the coalition bitmask, so repeated
coalitions never trigger a second model call.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Protocol, runtime_checkable

import numpy as np
from scipy.special import comb

from .bundle import ModelBundle, predict
from .coalition import Coalition
from .concepts import ConceptSet
from .errors import CoalitionSizeMismatch, ConceptAlreadyInCoalition, TooManyConcepts
from .masking import BaselineFill, apply_coalition
from .surrogate import Surrogate, surrogate_predict_batch

# Hard caps for exact enumeration, by how costly one evaluation is.
EXACT_LIMIT_DIRECT = 12
EXACT_LIMIT_FAST = 20

SAMPLERS = ("size_uniform", "permutation")


@runtime_checkable
class UtilityFn(Protocol):
    kind: str

    def __call__(self, coalition: Coalition) -> float: ...


@dataclass
class TableGame:
    """Payoffs read from a dense table indexed by coalition bitmask."""

    table: np.ndarray
    n: int
    kind: str = "table"

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=np.float64)
        if self.table.shape != (1 << self.n,):
            raise ValueError(f"table must have 2**n = {1 << self.n} entries")

    def __call__(self, coalition: Coalition) -> float:
        if coalition.n != self.n:
            raise CoalitionSizeMismatch(f"coalition n={coalition.n}, game n={self.n}")
        return float(self.table[coalition.bits])


@dataclass
class DirectUtility:
    """Target-class probability of the real model on the masked image.

    Every distinct coalition costs one full model evaluation; results are
    memoized on the bitmask.  ``model_calls`` counts cache misses only.
    """

    bundle: ModelBundle
    image: np.ndarray
    cs: ConceptSet
    fill: BaselineFill
    target_class: int
    kind: str = "direct"
    model_calls: int = 0
    _memo: dict[int, float] = field(default_factory=dict)

    def __call__(self, coalition: Coalition) -> float:
        bits = coalition.bits
        if bits not in self._memo:
            masked = apply_coalition(self.image, self.cs, coalition, self.fill)
            self._memo[bits] = float(predict(self.bundle, masked)[self.target_class])
            self.model_calls += 1
        return self._memo[bits]

    @property
    def distinct_coalitions(self) -> int:
        return len(self._memo)


@dataclass
class SurrogateUtility:
    """Target-class probability of the trained surrogate; supports batching."""

    surrogate: Surrogate
    target_class: int
    kind: str = "surrogate"
    evaluations: int = 0
    _memo: dict[int, float] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.surrogate.n

    @property
    def seen_bits(self) -> list[int]:
        return list(self._memo)

    def __call__(self, coalition: Coalition) -> float:
        return self.evaluate_bits([coalition.bits])[0]

    def evaluate_bits(self, bits_list: list[int]) -> list[float]:
        missing = [b for b in dict.fromkeys(bits_list) if b not in self._memo]
        if missing:
            rows = np.array(
                [[(b >> j) & 1 for j in range(self.n)] for b in missing], dtype=np.float64
            )
            probs = surrogate_predict_batch(self.surrogate, rows)[:, self.target_class]
            self.evaluations += len(missing)
            self._memo.update(zip(missing, probs.tolist()))
        return [self._memo[b] for b in bits_list]


@dataclass(frozen=True)
class ShapleyResult:
    values: np.ndarray
    stderr: np.ndarray | None
    method: str
    utility_kind: str
    num_samples: int | None = None
    sampler: str | None = None


def marginal_contribution(u: Callable[[Coalition], float], s: Coalition, i: int) -> float:
    """u(S with i) - u(S); the coalition must not already contain i."""
    if s.contains(i):
        raise ConceptAlreadyInCoalition(f"concept {i} already in coalition")
    return u(s.add(i)) - u(s)


def _evaluate_many(u: Callable[[Coalition], float], bits_list: list[int], n: int) -> np.ndarray:
    if isinstance(u, SurrogateUtility):
        return np.array(u.evaluate_bits(bits_list))
    memo: dict[int, float] = {}
    for b in bits_list:
        if b not in memo:
            memo[b] = u(Coalition(b, n))
    return np.array([memo[b] for b in bits_list])


def exact_shapley(u: Callable[[Coalition], float], n: int) -> ShapleyResult:
    """Enumerate every coalition; exact values, no sampling error.

    Raises TooManyConcepts past the enumeration caps (direct model games cap
    lower because each evaluation renders and classifies an image).
    """
    kind = getattr(u, "kind", "table")
    limit = EXACT_LIMIT_DIRECT if kind == "direct" else EXACT_LIMIT_FAST
    if n > limit:
        raise TooManyConcepts(f"exact enumeration supports n <= {limit} for {kind} games, got {n}")
    if n == 0:
        return ShapleyResult(np.zeros(0), None, "exact", kind)

    table = _evaluate_many(u, list(range(1 << n)), n)
    all_bits = np.arange(1 << n, dtype=np.uint64)
    sizes_all = np.bitwise_count(all_bits).astype(np.int64)
    values = np.zeros(n)
    for i in range(n):
        without_i = (all_bits >> np.uint64(i)) & np.uint64(1) == 0
        s_bits = all_bits[without_i]
        sizes = sizes_all[without_i]
        weights = 1.0 / (n * comb(n - 1, sizes))
        deltas = table[(s_bits | np.uint64(1 << i)).astype(np.int64)] - table[s_bits.astype(np.int64)]
        values[i] = float(np.sum(weights * deltas))
    return ShapleyResult(values, None, "exact", kind)


def _pack_bits(member: np.ndarray, positions: list[int]) -> list[int]:
    """Bitmasks from a (K, len(positions)) membership matrix."""
    if not positions:
        return [0] * member.shape[0]
    if max(positions) < 63:
        powers = np.array([1 << j for j in positions], dtype=np.uint64)
        packed = (member.astype(np.uint64) * powers).sum(axis=1)
        return [int(b) for b in packed]
    powers = np.array([1 << j for j in positions], dtype=object)
    return [int(b) for b in member.astype(object) @ powers]


def _size_uniform_deltas(
    u: Callable[[Coalition], float], n: int, i: int, num_samples: int, rng: np.random.Generator
) -> np.ndarray:
    others = [j for j in range(n) if j != i]
    sizes = rng.integers(0, n, size=num_samples)
    if n > 1:
        ranks = rng.random((num_samples, n - 1)).argsort(axis=1).argsort(axis=1)
        member = ranks < sizes[:, None]
    else:
        member = np.zeros((num_samples, 0), dtype=bool)
    s_bits = _pack_bits(member, others)
    with_bits = [b | (1 << i) for b in s_bits]
    vals = _evaluate_many(u, s_bits + with_bits, n)
    return vals[num_samples:] - vals[:num_samples]


def _permutation_deltas(
    u: Callable[[Coalition], float], n: int, num_samples: int, rng: np.random.Generator
) -> np.ndarray:
    deltas = np.zeros((num_samples, n))
    for k in range(num_samples):
        order = rng.permutation(n)
        prefix_bits = [0]
        for j in order:
            prefix_bits.append(prefix_bits[-1] | (1 << int(j)))
        vals = _evaluate_many(u, prefix_bits, n)
        for pos, j in enumerate(order):
            deltas[k, int(j)] = vals[pos + 1] - vals[pos]
    return deltas


def mc_shapley(
    u: Callable[[Coalition], float],
    n: int,
    num_samples: int = 1000,
    seed: int = 0,
    sampler: str = "size_uniform",
) -> ShapleyResult:
    """Monte-Carlo attribution values with per-concept standard errors.

    ``size_uniform`` draws, per concept and independently, a coalition size
    uniform on 0..n-1 and then a uniform subset of the other concepts at that
    size.  ``permutation`` draws whole orderings shared by every concept.
    Each concept i consumes its own seeded stream, so adding concepts never
    perturbs the draws of existing ones under ``size_uniform``.
    """
    if sampler not in SAMPLERS:
        raise ValueError(f"sampler must be one of {SAMPLERS}, got {sampler!r}")
    if num_samples < 2:
        raise ValueError("num_samples must be >= 2")
    if n == 0:
        return ShapleyResult(np.zeros(0), np.zeros(0), "mc", getattr(u, "kind", "table"),
                             num_samples, sampler)

    if sampler == "size_uniform":
        deltas = np.column_stack([
            _size_uniform_deltas(u, n, i, num_samples, np.random.default_rng([seed, i]))
            for i in range(n)
        ])
    else:
        deltas = _permutation_deltas(u, n, num_samples, np.random.default_rng([seed, 0]))

    values = deltas.mean(axis=0)
    stderr = deltas.std(axis=0, ddof=1) / np.sqrt(num_samples)
    return ShapleyResult(values, stderr, "mc", getattr(u, "kind", "table"), num_samples, sampler)
