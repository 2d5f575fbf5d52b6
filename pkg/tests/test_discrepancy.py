import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import brute_force_star_discrepancy
from stardisc.core import PointSet
from stardisc.covering import CornerCapError, build_grid_cover
from stardisc.discrepancy import (
    DiscrepancyResult,
    GuardExceededError,
    Method,
    cover_bound_discrepancy,
    exact_star_discrepancy,
    sampled_lower_bound,
)
from stardisc.generation import equidistant_1d

unit = st.floats(0.0, 1.0, exclude_max=True, allow_nan=False)
grid8 = st.integers(0, 7).map(lambda j: j / 8)


@st.composite
def small_sets(draw, coord=unit):
    s = draw(st.integers(1, 3))
    n = draw(st.integers(1, 8 if s == 3 else 12))
    return PointSet(draw(arrays(np.float64, (n, s), elements=coord)))


class TestExact:
    def test_single_1d(self):
        r = exact_star_discrepancy(PointSet([[0.5]]))
        assert r.method is Method.EXACT and r.value == 0.5 and r.lower == r.upper

    def test_single_2d(self):
        assert exact_star_discrepancy(PointSet([[0.5, 0.5]])).value == 0.75

    def test_equidistant_4(self):
        ps = PointSet([0.125, 0.375, 0.625, 0.875])
        assert exact_star_discrepancy(ps).value == pytest.approx(0.125, abs=1e-12)

    def test_zero_coordinates(self):
        ps = PointSet([[0.0, 0.0], [0.0, 0.5]])
        assert exact_star_discrepancy(ps).value == pytest.approx(brute_force_star_discrepancy(ps), abs=1e-12)

    def test_guard(self):
        ps = PointSet(np.random.default_rng(0).random((50, 3)))
        with pytest.raises(GuardExceededError):
            exact_star_discrepancy(ps, max_cells=1000)

    @given(small_sets())
    @settings(max_examples=60, deadline=None)
    def test_matches_brute_force(self, ps):
        assert exact_star_discrepancy(ps).value == pytest.approx(brute_force_star_discrepancy(ps), abs=1e-12)

    @given(small_sets(coord=grid8))
    @settings(max_examples=60, deadline=None)
    def test_matches_brute_force_with_ties(self, ps):
        assert exact_star_discrepancy(ps).value == pytest.approx(brute_force_star_discrepancy(ps), abs=1e-12)

    @given(small_sets(), st.randoms(use_true_random=False))
    @settings(max_examples=40, deadline=None)
    def test_permutation_invariance(self, ps, rnd):
        order = list(range(ps.N))
        rnd.shuffle(order)
        shuffled = PointSet(ps.coords[order])
        assert exact_star_discrepancy(shuffled).value == exact_star_discrepancy(ps).value
        delta = Fraction(1, 4)
        assert cover_bound_discrepancy(shuffled, delta) == cover_bound_discrepancy(ps, delta)

    @given(small_sets())
    @settings(max_examples=40, deadline=None)
    def test_padding_invariance(self, ps):
        doubled = PointSet(np.concatenate([ps.coords, ps.coords]))
        assert exact_star_discrepancy(doubled).value == pytest.approx(exact_star_discrepancy(ps).value, abs=1e-15)


class TestCoverSandwich:
    def test_single_point(self):
        r = cover_bound_discrepancy(PointSet([[0.5, 0.5]]), 0.25)
        assert r.lower <= 0.75 <= r.upper
        assert r.upper - r.lower <= 0.25

    def test_vacuous(self):
        r = cover_bound_discrepancy(PointSet([[0.3, 0.7]]), 1)
        assert r.upper == 1.0

    def test_equidistant(self):
        r = cover_bound_discrepancy(equidistant_1d(4), Fraction(1, 8))
        assert 0.0 <= r.lower <= 0.125 <= r.upper <= 0.25

    def test_accepts_cover(self):
        ps = PointSet([[0.5, 0.5]])
        cov = build_grid_cover(2, Fraction(1, 4))
        assert cover_bound_discrepancy(ps, cover=cov) == cover_bound_discrepancy(ps, Fraction(1, 4))

    def test_corner_cap(self):
        with pytest.raises(CornerCapError):
            cover_bound_discrepancy(PointSet([[0.5, 0.5, 0.5]]), Fraction(1, 64), corner_cap=10**4)

    @given(small_sets(), st.integers(0, 4))
    @settings(max_examples=40, deadline=None)
    def test_soundness_and_refinement(self, ps, j):
        exact = exact_star_discrepancy(ps).value
        coarse = cover_bound_discrepancy(ps, Fraction(1, 2**j))
        fine = cover_bound_discrepancy(ps, Fraction(1, 2 ** (j + 1)))
        for r in (coarse, fine):
            assert r.lower - 1e-12 <= exact <= r.upper + 1e-12
        assert fine.upper - fine.lower <= coarse.upper - coarse.lower
        assert max(coarse.lower, fine.lower) <= min(coarse.upper, fine.upper)


class TestSampled:
    def test_single_point_approaches_exact(self):
        r = sampled_lower_bound(PointSet([[0.5, 0.5]]), 10**5, seed=0)
        assert 0.74 <= r.lower <= 0.75

    def test_deterministic(self):
        ps = PointSet(np.random.default_rng(2).random((20, 2)))
        assert sampled_lower_bound(ps, 500, seed=7) == sampled_lower_bound(ps, 500, seed=7)

    @given(small_sets(), st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_never_exceeds_exact(self, ps, seed):
        assert sampled_lower_bound(ps, 200, seed).lower <= exact_star_discrepancy(ps).value + 1e-12

    def test_trials(self):
        with pytest.raises(ValueError):
            sampled_lower_bound(PointSet([[0.5]]), 0)


class TestResult:
    def test_dicts(self):
        assert DiscrepancyResult(0.5, 0.5, Method.EXACT, 2).to_dict() == {"method": "exact", "work": 2, "value": 0.5}
        d = DiscrepancyResult(0.1, 0.3, Method.SAMPLED, 4, seed=3).to_dict()
        assert d == {"method": "sampled", "work": 4, "lower": 0.1, "upper": 0.3, "seed": 3}

    def test_order(self):
        with pytest.raises(ValueError):
            DiscrepancyResult(0.5, 0.4, Method.COVER_SANDWICH, 1)
