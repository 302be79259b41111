"""Exact extracted-output joints by exhaustive seed/source enumeration.

For a family h and source X (with optional side channel Z), builds the dense
joint P(u, s) = P_S(s) sum_{x : h(s,x)=u} P_X(x), or its (u, s, z) analogue
P_S(s) sum_x 1{h(s,x)=u} P_X(x) P_{Z|X}(z|x).  The seed S is always uniform.

Enumeration walks seeds in contiguous partitions and merges accumulators by
addition, so the result is independent of the partition count; everything
here runs single-threaded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BudgetExceededError
from .families import DEFAULT_BUDGET, HashFamily, evaluate, hash_table, output_to_int
from .fields import FieldElement
from . import measures
from .measures import Alpha, JointPmf, Pmf, as_alpha


@dataclass(frozen=True)
class Source:
    """A pmf over distinct field elements, optionally with a side channel.

    ``side_channel[i, z]`` is P(Z=z | X=support[i]); each row sums to 1.
    """

    support: tuple[FieldElement, ...]
    probs: Pmf
    side_channel: np.ndarray | None = None

    def __post_init__(self):
        if len(self.support) != self.probs.support_size:
            raise ValueError("support and probability vector lengths differ")
        if len({x.to_int() for x in self.support}) != len(self.support):
            raise ValueError("support elements must be distinct")
        fields = {x.field for x in self.support}
        if len(fields) != 1:
            raise ValueError("support elements must share one field")
        if self.side_channel is not None:
            sc = np.asarray(self.side_channel, dtype=float)
            sc.setflags(write=False)
            object.__setattr__(self, "side_channel", sc)
            if sc.ndim != 2 or sc.shape[0] != len(self.support):
                raise ValueError("side channel needs one row per support element")
            if np.any(sc < 0):
                raise ValueError("side channel entries must be non-negative")
            for row in sc:
                if abs(math.fsum(row.tolist()) - 1.0) > measures.NORMALIZATION_TOL:
                    raise ValueError("each side-channel row must sum to 1")

    @property
    def field_params(self):
        return self.support[0].field

    @property
    def n_side(self) -> int:
        return 0 if self.side_channel is None else self.side_channel.shape[1]

    def xz_joint(self) -> JointPmf:
        """Joint pmf of (X, Z); requires a side channel."""
        if self.side_channel is None:
            raise ValueError("source has no side channel")
        arr = self.probs.probs[:, None] * self.side_channel
        return JointPmf(arr, self.probs.base_q)

    def entropy(self, a) -> float:
        return measures.renyi_entropy(self.probs, a)

    def conditional_entropy(self, a) -> float:
        return measures.conditional_renyi_entropy(self.xz_joint(), a)


@dataclass(frozen=True)
class ExtractionResult:
    """The exact joint over (u, s[, z]) together with its provenance."""

    joint: JointPmf
    family: HashFamily
    source: Source

    @property
    def has_side_channel(self) -> bool:
        return self.joint.probs.ndim == 3

    def source_entropy(self, a) -> float:
        """H_alpha(X|Z) when a side channel is present, else H_alpha(X)."""
        if self.has_side_channel:
            return self.source.conditional_entropy(a)
        return self.source.entropy(a)


def _check_source_field(family: HashFamily, source: Source):
    if source.field_params != family.field:
        raise ValueError("source support lies outside the family's field")


def extract_joint(
    family: HashFamily,
    source: Source,
    budget: int = DEFAULT_BUDGET,
    partitions: int = 1,
) -> ExtractionResult:
    """Exhaustively enumerate P(u, s[, z]); deterministic up to float summation."""
    _check_source_field(family, source)
    seeds = family.seed_space_size
    n_sup = len(source.support)
    if seeds * n_sup > budget:
        raise BudgetExceededError(
            f"{seeds} seeds x {n_sup} support points exceeds budget {budget}"
        )
    n_out = family.output_size
    x_ints = [x.to_int() for x in source.support]
    px = source.probs.probs
    ps = 1.0 / seeds
    shape = (n_out, seeds) if source.side_channel is None else (
        n_out,
        seeds,
        source.n_side,
    )
    acc = np.zeros(shape)
    bounds = np.linspace(0, seeds, max(1, partitions) + 1, dtype=int)
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        part = np.zeros(shape)
        for s in range(int(lo), int(hi)):
            table = hash_table(family, s)
            for i, xi in enumerate(x_ints):
                u = table[xi]
                if source.side_channel is None:
                    part[u, s] += px[i]
                else:
                    part[u, s, :] += px[i] * source.side_channel[i]
        acc += part
    joint = JointPmf(acc * ps, family.field.q)
    return ExtractionResult(joint, family, source)


@dataclass(frozen=True)
class DivergenceRow:
    alpha: Alpha
    joint: float
    conditional: float


@dataclass(frozen=True)
class DivergenceTable:
    rows: tuple[DivergenceRow, ...]
    tv_to_uniform: float
    kl_to_uniform: float


def empirical_divergences(result: ExtractionResult, alphas: Sequence) -> DivergenceTable:
    """Joint and conditional D_alpha per requested order, plus TV and KL."""
    joint = result.joint
    rows = tuple(
        DivergenceRow(
            as_alpha(a),
            measures.joint_divergence_from_uniform(joint, a),
            measures.conditional_divergence(joint, a),
        )
        for a in alphas
    )
    arr = joint.probs
    n_out = arr.shape[0]
    marginal = arr.sum(axis=0)
    ref = np.broadcast_to(marginal / n_out, arr.shape).reshape(-1).copy()
    flat = Pmf(arr.reshape(-1), joint.base_q)
    refp = Pmf(ref, joint.base_q)
    return DivergenceTable(
        rows,
        measures.tv_distance(flat, refp),
        measures.renyi_divergence(flat, refp, Alpha.one()),
    )


@dataclass(frozen=True)
class BucketEstimate:
    mean: float
    stderr: float | None
    mode: str
    n_seeds: int
    rng_seed: int | None = None


def _max_bucket_for_seed(family: HashFamily, seed: int, x_ints: list[int]) -> int:
    counts: dict[int, int] = {}
    f = family.field
    for xi in x_ints:
        u = output_to_int(evaluate(family, seed, f.from_int(xi)), f.q)
        counts[u] = counts.get(u, 0) + 1
    return max(counts.values())


def expected_max_bucket(
    family: HashFamily,
    subset: Sequence[FieldElement],
    mode: str = "exact",
    n_samples: int = 1000,
    rng_seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> BucketEstimate:
    """E_S[max bucket occupancy] when hashing every element of the subset.

    Exact mode averages over the whole seed space; sampled mode draws seeds
    with a seeded generator and reports the standard error of the mean.
    """
    if not subset:
        raise ValueError("subset must be non-empty")
    x_ints = [x.to_int() for x in subset]
    if len(set(x_ints)) != len(x_ints):
        raise ValueError("subset elements must be distinct")
    for x in subset:
        if x.field != family.field:
            raise ValueError("subset element from the wrong field")
    seeds = family.seed_space_size
    if mode == "exact":
        if seeds * len(subset) > budget:
            raise BudgetExceededError(
                f"{seeds} seeds x {len(subset)} elements exceeds budget {budget}"
            )
        total = math.fsum(
            _max_bucket_for_seed(family, s, x_ints) for s in range(seeds)
        )
        return BucketEstimate(total / seeds, None, "exact", seeds)
    if mode == "sampled":
        if n_samples * len(subset) > budget:
            raise BudgetExceededError("sample count exceeds budget")
        rng = np.random.default_rng(rng_seed)
        draws = rng.integers(0, seeds, size=n_samples)
        vals = np.array(
            [_max_bucket_for_seed(family, int(s), x_ints) for s in draws], dtype=float
        )
        stderr = float(vals.std(ddof=1) / math.sqrt(n_samples)) if n_samples > 1 else 0.0
        return BucketEstimate(float(vals.mean()), stderr, "sampled", n_samples, rng_seed)
    raise ValueError(f"unknown mode {mode!r}")
