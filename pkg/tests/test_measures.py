import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renyi_extract.measures import (
    Alpha,
    JointPmf,
    Pmf,
    conditional_divergence,
    conditional_renyi_entropy,
    joint_divergence_from_uniform,
    renyi_divergence,
    renyi_entropy,
    tilde_conditional_entropy,
    tv_distance,
)

ALPHA_GRID = [Alpha.one(), Alpha(1.5), Alpha(2.0), Alpha(3.0), Alpha.infinity()]


def pmfs(min_size=2, max_size=8, base_q=2):
    return (
        st.lists(
            st.floats(min_value=1e-6, max_value=1.0),
            min_size=min_size,
            max_size=max_size,
        )
        .map(lambda w: Pmf(np.array(w) / sum(w), base_q))
    )


class TestAlpha:
    def test_rejects_values_at_or_below_one(self):
        with pytest.raises(ValueError):
            Alpha(0.5)
        with pytest.raises(ValueError):
            Alpha(1.0 + 1e-9)  # too close to 1: use the KL limit

    def test_limits(self):
        assert Alpha.one().is_one
        assert Alpha.infinity().is_infinite
        assert Alpha(2.0).is_finite_order


class TestPmfValidation:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            Pmf(np.array([0.5, 0.6]), 2)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            Pmf(np.array([1.5, -0.5]), 2)

    def test_joint_marginals(self):
        j = JointPmf(np.array([[0.4, 0.1], [0.1, 0.4]]), 2)
        assert np.allclose(j.marginal(0).probs, [0.5, 0.5])
        assert np.allclose(j.marginal(1).probs, [0.5, 0.5])


class TestRenyiEntropy:
    @pytest.mark.parametrize("a", ALPHA_GRID)
    def test_uniform_gives_m(self, a):
        p = Pmf.uniform(8, base_q=2)
        assert renyi_entropy(p, a) == pytest.approx(3.0, abs=1e-12)

    @pytest.mark.parametrize("a", ALPHA_GRID)
    def test_point_mass_gives_zero(self, a):
        p = Pmf(np.array([1.0, 0.0, 0.0]), 2)
        assert renyi_entropy(p, a) == pytest.approx(0.0, abs=1e-12)

    def test_collision_entropy_worked_value(self):
        p = Pmf(np.array([0.75, 0.25]), 2)
        assert renyi_entropy(p, Alpha(2.0)) == pytest.approx(
            -math.log2(10 / 16), abs=1e-12
        )

    @given(pmfs())
    @settings(max_examples=60)
    def test_nonincreasing_in_alpha(self, p):
        values = [renyi_entropy(p, a) for a in ALPHA_GRID]
        for lo, hi in zip(values[1:], values):
            assert lo <= hi + 1e-9

    @given(pmfs())
    @settings(max_examples=60)
    def test_scaled_entropy_nondecreasing_in_alpha(self, p):
        # (alpha-1)/alpha * H_alpha grows with alpha; ratio 1 at infinity.
        grid = [(1.5, Alpha(1.5)), (2.0, Alpha(2.0)), (3.0, Alpha(3.0))]
        values = [(a - 1) / a * renyi_entropy(p, al) for a, al in grid]
        values.append(renyi_entropy(p, Alpha.infinity()))
        for lo, hi in zip(values, values[1:]):
            assert hi >= lo - 1e-9

    @given(pmfs(), st.permutations(range(5)))
    @settings(max_examples=40)
    def test_permutation_invariance(self, p, perm):
        idx = [i % p.support_size for i in perm[: p.support_size]]
        if sorted(idx) != list(range(p.support_size)):
            return
        shuffled = Pmf(p.probs[idx], p.base_q)
        for a in ALPHA_GRID:
            assert renyi_entropy(shuffled, a) == pytest.approx(
                renyi_entropy(p, a), abs=1e-12
            )


class TestRenyiDivergence:
    @pytest.mark.parametrize("a", ALPHA_GRID)
    def test_self_divergence_zero(self, a):
        p = Pmf(np.array([0.3, 0.3, 0.4]), 2)
        assert renyi_divergence(p, p, a) == pytest.approx(0.0, abs=1e-12)

    @given(pmfs(min_size=4, max_size=4))
    @settings(max_examples=60)
    def test_uniform_reference_identity(self, p):
        uniform = Pmf.uniform(4, base_q=2)
        for a in ALPHA_GRID:
            d = renyi_divergence(p, uniform, a)
            assert d == pytest.approx(2.0 - renyi_entropy(p, a), abs=1e-12)

    def test_infinity_order_max_log_ratio(self):
        p = Pmf(np.array([1.0, 0.0]), 2)
        r = Pmf(np.array([0.5, 0.5]), 2)
        assert renyi_divergence(p, r, Alpha.infinity()) == pytest.approx(1.0)

    def test_absolute_continuity_failure_gives_inf(self):
        p = Pmf(np.array([0.5, 0.5]), 2)
        r = Pmf(np.array([1.0, 0.0]), 2)
        for a in ALPHA_GRID:
            assert renyi_divergence(p, r, a) == math.inf

    @given(pmfs(min_size=5, max_size=5), pmfs(min_size=5, max_size=5))
    @settings(max_examples=60)
    def test_monotone_in_alpha(self, p, r):
        values = [renyi_divergence(p, r, a) for a in ALPHA_GRID]
        for lo, hi in zip(values, values[1:]):
            assert hi >= lo - 1e-9


class TestTvDistance:
    def test_identical(self):
        p = Pmf(np.array([0.2, 0.8]), 2)
        assert tv_distance(p, p) == 0.0

    def test_disjoint(self):
        assert tv_distance(Pmf(np.array([1.0, 0.0]), 2), Pmf(np.array([0.0, 1.0]), 2)) == 1.0

    def test_worked_value(self):
        p = Pmf(np.array([0.75, 0.25]), 2)
        r = Pmf(np.array([0.5, 0.5]), 2)
        assert tv_distance(p, r) == pytest.approx(0.25)


class TestConditionalEntropies:
    def test_independent_reduces_to_marginal(self):
        px = np.array([0.7, 0.3])
        pz = np.array([0.4, 0.6])
        j = JointPmf(np.outer(px, pz), 2)
        for a in (Alpha(1.5), Alpha(2.0), Alpha(3.0)):
            expected = renyi_entropy(Pmf(px, 2), a)
            assert conditional_renyi_entropy(j, a) == pytest.approx(expected, abs=1e-12)
            assert tilde_conditional_entropy(j, a) == pytest.approx(expected, abs=1e-12)

    def test_diagonal_joint_gives_zero(self):
        j = JointPmf(np.diag([0.5, 0.5]), 2)
        assert conditional_renyi_entropy(j, Alpha(2.0)) == pytest.approx(0.0, abs=1e-12)
        assert tilde_conditional_entropy(j, Alpha(2.0)) == pytest.approx(0.0, abs=1e-12)

    def test_worked_conditional_value(self):
        j = JointPmf(np.array([[0.4, 0.1], [0.1, 0.4]]), 2)
        expected = -math.log2(0.5 * (0.64 + 0.04) + 0.5 * (0.04 + 0.64))
        assert conditional_renyi_entropy(j, Alpha(2.0)) == pytest.approx(
            expected, abs=1e-12
        )

    def test_deterministic_per_z_tilde_is_zero(self):
        j = JointPmf(np.array([[0.3, 0.0], [0.0, 0.7]]), 2)
        assert tilde_conditional_entropy(j, Alpha(2.5)) == pytest.approx(0.0, abs=1e-12)

    def test_rejects_non_finite_order(self):
        j = JointPmf(np.array([[0.4, 0.1], [0.1, 0.4]]), 2)
        with pytest.raises(ValueError):
            conditional_renyi_entropy(j, Alpha.infinity())
        with pytest.raises(ValueError):
            tilde_conditional_entropy(j, Alpha.one())


class TestConditionalDivergence:
    def test_uniform_conditionals_give_zero(self):
        j = JointPmf(np.full((4, 3), 1 / 12), 2)
        for a in ALPHA_GRID:
            assert conditional_divergence(j, a) == pytest.approx(0.0, abs=1e-12)

    def test_seed_independent_joint(self):
        pu = np.array([0.5, 0.25, 0.125, 0.125])
        j = JointPmf(np.outer(pu, [0.5, 0.5]), 2)
        uniform = Pmf.uniform(4, 2)
        for a in ALPHA_GRID:
            expected = renyi_divergence(Pmf(pu, 2), uniform, a)
            assert conditional_divergence(j, a) == pytest.approx(expected, abs=1e-12)

    def test_identity_m_minus_tilde_entropy(self):
        rng = np.random.default_rng(7)
        arr = rng.random((4, 6))
        arr /= arr.sum()
        j = JointPmf(arr, 2)
        for a in (Alpha(1.5), Alpha(2.0), Alpha(2.5)):
            assert conditional_divergence(j, a) == pytest.approx(
                2.0 - tilde_conditional_entropy(j, a), abs=1e-12
            )


class TestJointDivergenceFromUniform:
    def test_product_of_uniform_and_marginal_gives_zero(self):
        ps = np.array([0.2, 0.3, 0.5])
        j = JointPmf(np.outer([0.25] * 4, ps), 2)
        for a in ALPHA_GRID:
            assert joint_divergence_from_uniform(j, a) == pytest.approx(0.0, abs=1e-12)

    def test_dominates_conditional_divergence(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            arr = rng.random((4, 5))
            arr /= arr.sum()
            j = JointPmf(arr, 2)
            for a in ALPHA_GRID:
                assert conditional_divergence(j, a) <= joint_divergence_from_uniform(
                    j, a
                ) + 1e-12

    def test_against_flat_direct_summation_oracle(self):
        arr = np.array([[0.15, 0.05], [0.35, 0.45]])
        j = JointPmf(arr, 2)
        a = 2.0
        marginal = arr.sum(axis=0)
        total = 0.0
        for u in range(2):
            for s in range(2):
                q_ref = marginal[s] / 2
                total += arr[u, s] ** a * q_ref ** (1 - a)
        expected = math.log2(total) / (a - 1)
        assert joint_divergence_from_uniform(j, Alpha(a)) == pytest.approx(
            expected, abs=1e-12
        )
