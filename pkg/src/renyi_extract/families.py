"""Seeded hash families h : S x GF(q^n) -> Z_q^m and exact universality checks.

Three kinds are supported:

* ``polynomial`` -- the seed encodes k field coefficients (s_0, ..., s_{k-1});
  h(s, x) is the first m coefficients of sum_i s_i x^i evaluated in GF(q^n).
  This family is k-wise independent, hence l-universal for every l <= k.
* ``full_table`` -- the seed indexes an arbitrary truth table GF(q^n) -> Z_q^m;
  the uniform seed makes all hash values independent and uniform.
* ``constant`` -- a single seed mapping everything to 0^m.  Deliberately
  broken; useful as a negative control for the certifier.

Collision probabilities are exact rationals (Fraction), never floats.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError
from .fields import FieldElement, FieldParams, gf_add, gf_mul

DEFAULT_BUDGET = 10_000_000

KINDS = ("polynomial", "full_table", "constant")


@dataclass(frozen=True)
class HashFamily:
    kind: str
    field: FieldParams
    k: int
    m: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.k < 2:
            raise ValueError("independence order k must be >= 2")
        if self.m < 1:
            raise ValueError("output length m must be >= 1")
        if self.kind == "polynomial" and self.m > self.field.n:
            raise ValueError("polynomial kind requires m <= n")

    @property
    def seed_space_size(self) -> int:
        if self.kind == "polynomial":
            return self.field.size ** self.k
        if self.kind == "full_table":
            return (self.field.q ** self.m) ** self.field.size
        return 1

    @property
    def output_size(self) -> int:
        return self.field.q ** self.m


def output_to_int(symbols: tuple[int, ...], q: int) -> int:
    v = 0
    for s in reversed(symbols):
        v = v * q + s
    return v


def _int_to_output(value: int, q: int, m: int) -> tuple[int, ...]:
    out = []
    for _ in range(m):
        value, s = divmod(value, q)
        out.append(s)
    return tuple(out)


def evaluate(family: HashFamily, seed: int, x: FieldElement) -> tuple[int, ...]:
    """h(seed, x) as a length-m tuple of Z_q symbols."""
    if not 0 <= seed < family.seed_space_size:
        raise ValueError(f"seed {seed} outside [0, {family.seed_space_size})")
    if x.field != family.field:
        raise ValueError("input element from the wrong field")
    f = family.field
    if family.kind == "polynomial":
        # Decode base-q^n, s_0 least significant, then Horner.
        coeffs = []
        v = seed
        for _ in range(family.k):
            v, digit = divmod(v, f.size)
            coeffs.append(f.from_int(digit))
        acc = f.zero()
        for c in reversed(coeffs):
            acc = gf_add(gf_mul(acc, x), c)
        return acc.coeffs[: family.m]
    if family.kind == "full_table":
        entry = (seed // (family.output_size ** x.to_int())) % family.output_size
        return _int_to_output(entry, f.q, family.m)
    return (0,) * family.m


def hash_table(family: HashFamily, seed: int) -> list[int]:
    """h(seed, x) for every x in canonical order, encoded as output integers."""
    f = family.field
    q = f.q
    return [
        output_to_int(evaluate(family, seed, f.from_int(v)), q)
        for v in range(f.size)
    ]


def verify_universality(
    family: HashFamily, l: int, budget: int = DEFAULT_BUDGET
) -> Fraction:
    """Max over distinct l-tuples of Pr_S[h(S,x_1) = ... = h(S,x_l)], exactly.

    The family is l-universal iff the returned ratio is <= q^{-m(l-1)}.
    The all-equal event is symmetric in the tuple, so unordered l-subsets
    suffice.
    """
    if l < 2:
        raise ValueError("universality order l must be >= 2")
    n_inputs = family.field.size
    if l > n_inputs:
        raise ValueError(f"l={l} exceeds domain size {n_inputs}")
    seeds = family.seed_space_size
    if seeds * n_inputs > budget:
        raise BudgetExceededError(
            f"{seeds} seeds x {n_inputs} inputs exceeds budget {budget}"
        )
    tables = [hash_table(family, s) for s in range(seeds)]
    worst = 0
    for subset in itertools.combinations(range(n_inputs), l):
        first = subset[0]
        rest = subset[1:]
        count = 0
        for table in tables:
            v = table[first]
            if all(table[i] == v for i in rest):
                count += 1
        worst = max(worst, count)
    return Fraction(worst, seeds)


@dataclass(frozen=True)
class UniversalityVerdict:
    l: int
    collision_probability: Fraction
    threshold: Fraction
    passed: bool


def certify_k_star(
    family: HashFamily, budget: int = DEFAULT_BUDGET
) -> list[UniversalityVerdict]:
    """Check l-universality for every l in {2, ..., k}.

    The family is k*-universal iff every verdict passes.
    """
    verdicts = []
    for l in range(2, family.k + 1):
        ratio = verify_universality(family, l, budget=budget)
        threshold = Fraction(1, family.output_size ** (l - 1))
        verdicts.append(UniversalityVerdict(l, ratio, threshold, ratio <= threshold))
    return verdicts


def is_k_star_universal(family: HashFamily, budget: int = DEFAULT_BUDGET) -> bool:
    return all(v.passed for v in certify_k_star(family, budget=budget))
