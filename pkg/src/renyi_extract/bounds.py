"""Closed-form divergence bounds, output-length thresholds, and auxiliaries.

Every calculator works in the base-q log domain, assembling sums with a
log-sum-exp so that exponents m - H up to a few hundred q-ary units never
overflow.  Stirling numbers are exact integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .measures import Alpha, as_alpha

MAX_STIRLING_K = 64
SLACK = 1e-9


@lru_cache(maxsize=None)
def stirling2(k: int, l: int) -> int:
    """Partitions of a k-set into l nonempty blocks, exact integer."""
    if l < 0 or k < 0 or k > MAX_STIRLING_K:
        raise ValueError(f"need 0 <= l, 0 <= k <= {MAX_STIRLING_K}, got k={k}, l={l}")
    if l > k:
        return 0
    if k == 0:
        return 1
    if l == 0:
        return 0
    return l * stirling2(k - 1, l) + stirling2(k - 1, l - 1)


def bell_number(k: int) -> int:
    return sum(stirling2(k, l) for l in range(k + 1))


def logq_sum_exp(terms: list[float], q: int) -> float:
    """log_q(sum_i q^{t_i}) for base-q log-domain terms, overflow-safe."""
    if not terms:
        return -math.inf
    top = max(terms)
    if top == -math.inf:
        return -math.inf
    lnq = math.log(q)
    acc = math.fsum(math.exp((t - top) * lnq) for t in terms)
    return top + math.log(acc) / lnq


def _logq(x: float, q: int) -> float:
    return math.log(x) / math.log(q)


def bound_integer_alpha(q: int, m: int, alpha: int, entropy: float) -> float:
    """Moment-sum bound on D_alpha for integer alpha in {2, ..., k}:
    (1/(alpha-1)) log_q sum_{l=1}^{alpha} S(alpha, l) q^{(alpha-l)(m-H)}.
    """
    if alpha < 2 or alpha != int(alpha):
        raise ValueError("integer alpha >= 2 required")
    alpha = int(alpha)
    gap = m - entropy
    terms = [
        _logq(stirling2(alpha, l), q) + (alpha - l) * gap for l in range(1, alpha + 1)
    ]
    return logq_sum_exp(terms, q) / (alpha - 1)


def bound_real_alpha(q: int, m: int, k: int, alpha: float, entropy: float) -> float:
    """Bound on the joint D_alpha for real alpha in (1, k]:
    (1/(alpha-1)) log_q [ sum_{l=1}^{c-1} l S(c-1, l) q^{(alpha-l)(m-H)}
                        + sum_{l=2}^{c}  S(c-1, l-1) q^{(c-l)(m-H)} ],
    with c = ceil(alpha).
    """
    if not 1.0 < alpha <= k:
        raise ValueError(f"alpha must lie in (1, k], got alpha={alpha}, k={k}")
    c = math.ceil(alpha)
    gap = m - entropy
    terms = [
        _logq(l * stirling2(c - 1, l), q) + (alpha - l) * gap for l in range(1, c)
    ]
    # S(c-1, 0) = 0 drops the l = 1 term of the second sum.
    terms += [
        _logq(stirling2(c - 1, l - 1), q) + (c - l) * gap for l in range(2, c + 1)
    ]
    return logq_sum_exp(terms, q) / (alpha - 1.0)


def bound_real_alpha_simplified(
    q: int, m: int, k: int, alpha: float, entropy: float
) -> float:
    """Simplified (weaker) form: sum_{l=1}^{c} S(c, l) q^{e_l (m-H)} with
    e_l = alpha - l when m <= H, else e_l = ceil(alpha) - l.
    """
    if not 1.0 < alpha <= k:
        raise ValueError(f"alpha must lie in (1, k], got alpha={alpha}, k={k}")
    c = math.ceil(alpha)
    gap = m - entropy
    top = alpha if m <= entropy else float(c)
    terms = [_logq(stirling2(c, l), q) + (top - l) * gap for l in range(1, c + 1)]
    return logq_sum_exp(terms, q) / (alpha - 1.0)


def dk_bound_simple(q: int, m: int, k: int, entropy: float) -> float:
    """Exponential Poisson-moment majorant: k^2 / (2 q^{H-m} (k-1) ln q)."""
    if k < 2:
        raise ValueError("k >= 2 required")
    return k * k / (2.0 * q ** (entropy - m) * (k - 1) * math.log(q))


def gamma_fn(y: float, rel_tol: float = 1e-12) -> float:
    """Inverse of x -> x / ln(x + 1) on y >= 1, by bracketed bisection."""
    if y < 1.0:
        raise ValueError(f"gamma_fn requires y >= 1, got {y}")
    if y == 1.0:
        return 0.0

    def forward(x: float) -> float:
        return x / math.log1p(x)

    hi = max(4.0, y * math.log(y + 1.0) * 4.0)
    while forward(hi) < y:
        hi *= 2.0
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if forward(mid) < y:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rel_tol * max(1.0, abs(hi)):
            break
    return 0.5 * (lo + hi)


def dk_bound_sharp(q: int, m: int, k: int, entropy: float) -> float:
    """Sharper moment bound: (k/(k-1)) log_q( k q^{m-H} / ln(k q^{m-H} + 1) )."""
    if k < 2:
        raise ValueError("k >= 2 required")
    x = k * q ** (m - entropy)
    return (k / (k - 1)) * _logq(x / math.log1p(x), q)


def bound_alpha_above_k(q: int, m: int, k: int, alpha: float, entropy: float) -> float:
    """Conditional-divergence bound for alpha in (k, inf):
    (alpha-k) m / (k (alpha-1)) + (alpha/(alpha-1)) log_q(k q^{m-H} / ln(k q^{m-H}+1)).
    """
    if not alpha > k:
        raise ValueError(f"alpha must exceed k, got alpha={alpha}, k={k}")
    x = k * q ** (m - entropy)
    log_term = _logq(x / math.log1p(x), q)
    return (alpha - k) * m / (k * (alpha - 1.0)) + alpha / (alpha - 1.0) * log_term


def bound_infty(q: int, m: int, k: int, entropy: float) -> float:
    """alpha -> inf limit: m/k + log_q(k q^{m-H} / ln(k q^{m-H} + 1))."""
    if k < 2:
        raise ValueError("k >= 2 required")
    x = k * q ** (m - entropy)
    return m / k + _logq(x / math.log1p(x), q)


THRESHOLD_REGIMES = ("integer-alpha", "corollary", "min-entropy", "sharp-gamma")


def m_threshold(
    regime: str,
    q: int,
    entropy: float,
    epsilon: float,
    alpha: float | None = None,
    k: int | None = None,
) -> float:
    """Largest real m for which the regime's epsilon-guarantee applies.

    * ``integer-alpha``: integer alpha in [2, k]; guarantees joint D_alpha <= eps.
    * ``corollary``:   alpha in (1, 2];        guarantees joint D_alpha <= eps.
    * ``min-entropy``: needs k; guarantees conditional D_inf <= m/k + eps.
    * ``sharp-gamma``: needs k; sharper threshold for joint D_k <= eps.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    lnq = math.log(q)
    if regime == "integer-alpha":
        if alpha is None or alpha < 2 or alpha != int(alpha):
            raise ValueError("integer-alpha regime requires integer alpha >= 2")
        return entropy - _logq(alpha * alpha / (2.0 * epsilon * (alpha - 1) * lnq), q)
    if regime == "corollary":
        if alpha is None or not 1.0 < alpha <= 2.0:
            raise ValueError("corollary regime requires alpha in (1, 2]")
        return entropy - _logq(1.0 / (epsilon * (alpha - 1.0) * lnq), q) / (alpha - 1.0)
    if regime == "min-entropy":
        if k is None:
            raise ValueError("min-entropy regime requires k")
        return entropy - _logq(k / (2.0 * epsilon * lnq), q)
    if regime == "sharp-gamma":
        if k is None:
            raise ValueError("sharp-gamma regime requires k")
        y = q ** (epsilon * (k - 1) / k)
        return entropy + _logq(gamma_fn(y) / k, q)
    raise ValueError(f"unknown regime {regime!r}; expected one of {THRESHOLD_REGIMES}")


def bucket_bound(q: int, m: int, k: int, subset_size: int) -> float:
    """Upper bound on the seed-averaged largest hash bucket:
    k q^{m/k} / ln(k q^m / |A| + 1).
    """
    if subset_size < 1:
        raise ValueError("subset_size must be >= 1")
    return k * q ** (m / k) / math.log1p(k * q**m / subset_size)


@dataclass(frozen=True)
class BoundInputs:
    q: int
    m: int
    k: int
    alpha: Alpha
    entropy: float
    epsilon: float | None = None

    def __post_init__(self):
        if self.m < 1 or self.k < 2 or self.entropy < 0:
            raise ValueError("require m >= 1, k >= 2, entropy >= 0")


@dataclass(frozen=True)
class BoundReport:
    """One evaluated bound with its verdict against an empirical value."""

    name: str
    inputs: BoundInputs
    bound: float
    empirical: float | None = None
    note: str = ""

    @property
    def satisfied(self) -> bool:
        if self.empirical is None:
            return True
        return self.empirical <= self.bound + SLACK

    @property
    def slack(self) -> float:
        if self.empirical is None:
            return math.inf
        return self.bound - self.empirical

    def as_dict(self) -> dict:
        a = self.inputs.alpha
        return {
            "name": self.name,
            "q": self.inputs.q,
            "m": self.inputs.m,
            "k": self.inputs.k,
            "alpha": "inf" if a.is_infinite else a.value,
            "entropy": self.inputs.entropy,
            "epsilon": self.inputs.epsilon,
            "bound": self.bound,
            "empirical": self.empirical,
            "satisfied": self.satisfied,
            "note": self.note,
        }


def joint_bound(q: int, m: int, k: int, alpha, entropy: float) -> float:
    """Dispatch: joint-divergence bound for alpha in (1, k], conditional-regime
    bound for alpha > k (including infinity)."""
    a = as_alpha(alpha)
    if a.is_infinite:
        return bound_infty(q, m, k, entropy)
    if a.value <= k:
        return bound_real_alpha(q, m, k, a.value, entropy)
    return bound_alpha_above_k(q, m, k, a.value, entropy)
