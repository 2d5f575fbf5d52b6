import math

import numpy as np
import pytest

from stardisc.discrepancy import Method, cover_bound_discrepancy, exact_star_discrepancy
from stardisc.generation import (
    attempt_rng,
    certify,
    equidistant_1d,
    generate_certified,
    hammersley_2d,
    radical_inverse_base2,
    theorem_threshold,
    uniform_random,
)

# Exact D* of the base-2 Hammersley sets, from a brute-force half-open-box oracle.
HAMMERSLEY_DSTAR = {4: 0.5, 16: 0.171875, 64: 0.0537109375}


def test_uniform_deterministic_and_in_range():
    a, b = uniform_random(3, 100, 5), uniform_random(3, 100, 5)
    assert a == b
    assert a != uniform_random(3, 100, 6)
    assert np.all((a.coords >= 0) & (a.coords < 1))


def test_uniform_mean():
    ps = uniform_random(4, 10**5, 11)
    assert np.all(np.abs(ps.coords.mean(axis=0) - 0.5) < 0.01)


@pytest.mark.parametrize("N", [1, 2, 3, 4, 7, 16, 33])
def test_equidistant(N):
    ps = equidistant_1d(N)
    assert exact_star_discrepancy(ps).value == pytest.approx(1 / (2 * N), abs=1e-12)
    assert 1 / (2 * N) < 9 / math.sqrt(N)


def test_equidistant_single():
    assert equidistant_1d(1).coords.tolist() == [[0.5]]


@pytest.mark.parametrize("n, v", [(0, 0.0), (1, 0.5), (6, 0.375), (2, 0.25), (13, 0.6875)])
def test_radical_inverse(n, v):
    assert radical_inverse_base2(n) == v


def test_radical_inverse_negative():
    with pytest.raises(ValueError):
        radical_inverse_base2(-1)


def test_hammersley_4():
    assert hammersley_2d(4).coords.tolist() == [[0, 0], [0.25, 0.5], [0.5, 0.25], [0.75, 0.75]]


@pytest.mark.parametrize("N", [4, 16, 64])
def test_hammersley_fixture(N):
    from conftest import brute_force_star_discrepancy

    ps = hammersley_2d(N)
    assert exact_star_discrepancy(ps).value == HAMMERSLEY_DSTAR[N]
    assert brute_force_star_discrepancy(ps) == pytest.approx(HAMMERSLEY_DSTAR[N], abs=1e-12)


@pytest.mark.parametrize("N", [4, 16, 64, 256, 1024])
def test_hammersley_below_threshold(N):
    ps = hammersley_2d(N)
    assert exact_star_discrepancy(ps).value < theorem_threshold(2, N)
    assert len({tuple(p) for p in ps.coords}) == N
    assert np.array_equal(ps.coords[:, 0], np.arange(N) / N)


def test_threshold():
    assert theorem_threshold(2, 512) == pytest.approx(0.5625)
    assert theorem_threshold(3, 300) == pytest.approx(0.9)


def test_certified_passes_first_attempt():
    ps, rep = generate_certified(2, 512, seed=1)
    assert rep.passed and rep.attempts == 1 and rep.method == "exact"
    assert rep.threshold == pytest.approx(0.5625)
    assert exact_star_discrepancy(ps).value == rep.estimate.value < rep.threshold


def test_certified_trivial():
    ps, rep = generate_certified(10, 100, seed=1)
    assert ps is None and rep.passed and rep.attempts == 0 and rep.trivial
    assert rep.threshold == pytest.approx(9 * math.sqrt(0.1))


def test_certified_deterministic():
    assert generate_certified(2, 200, seed=4)[1] == generate_certified(2, 200, seed=4)[1]


def test_certified_sandwich_path():
    ps, rep = generate_certified(3, 1024, seed=2, max_cells=10**6)
    assert rep.passed and rep.method == "cover_sandwich"
    assert rep.estimate.upper < rep.threshold
    assert cover_bound_discrepancy(ps, 1 / 16).upper == pytest.approx(rep.estimate.upper)


def test_certified_failure_reports_best():
    # a threshold no random set can meet: force sandwich with a useless delta
    ps, rep = generate_certified(3, 1024, seed=2, max_attempts=3, delta_for_sandwich=1, max_cells=10)
    assert not rep.passed and rep.attempts == 3
    assert rep.estimate.upper == 1.0 and ps is not None


def test_attempt_streams_independent():
    a = attempt_rng(5, 0).random(4)
    b = attempt_rng(5, 1).random(4)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, attempt_rng(5, 0).random(4))


def test_certify_given_set():
    rep = certify(equidistant_1d(4))
    assert rep.trivial
    rep = certify(hammersley_2d(1024))
    assert rep.passed and rep.estimate.method is Method.EXACT
