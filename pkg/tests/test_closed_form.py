import math

import numpy as np
import pytest

from treewalk import closed_form as cf
from treewalk.dynamics import default_grid, plan, probability_trace, trace_maximum
from treewalk.graphs import basis_state, build_spider, build_star


def numeric_center(g, t):
    return probability_trace(plan(g, "adjacency", basis_state(g, 1)), [g.center], t).probabilities[0]


def test_star_examples():
    assert cf.star_center_prob(3, 1, math.pi / (2 * math.sqrt(3))) == pytest.approx(1 / 3, abs=1e-15)
    assert cf.star_center_prob(5, 2.0, 0.0) == 0.0


def zero_count(p, rel=1e-3):
    mins = (p[1:-1] < p[:-2]) & (p[1:-1] <= p[2:]) & (p[1:-1] < rel * p.max())
    return int(mins.sum())


def test_star_frequency_doubles():
    t = np.linspace(0, 10 * math.pi, 100001)
    assert zero_count(cf.star_center_prob(3, 2, t)) == 2 * zero_count(cf.star_center_prob(3, 1, t))


def test_spider2_examples():
    assert cf.spider2_center_prob(3, 1, math.pi / 2) == pytest.approx(0.25, abs=1e-15)
    assert cf.spider2_center_prob(3, 1, math.pi) == pytest.approx(0.0, abs=1e-15)
    assert cf.spider2_center_prob(4, 3.0, 0.0) == 0.0
    r = math.sqrt(301)
    assert cf.spider2_center_prob(3, 10, math.pi / r) == pytest.approx(400 / 90601, rel=1e-14)


def test_spider2_large_J_vs_exact():
    t = default_grid()
    approx = cf.spider2_center_prob_large_J(3, 10, t).max()
    assert approx == pytest.approx(4 / 900, rel=1e-6)
    assert (4 / 900) / (400 / 90601) - 1 < 0.007
    assert cf.spider2_center_prob_large_J(3, 10, 0.0) == 0.0


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("J", [1.0, 2.0, 3.0, 10.0])
def test_exact_forms_match_numerics(n, J):
    t = default_grid()
    assert np.abs(cf.star_center_prob(n, J, t) - numeric_center(build_star(n, J), t)).max() < 1e-10
    assert np.abs(cf.spider2_center_prob(n, J, t) - numeric_center(build_spider(n, 2, J), t)).max() < 1e-10


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("J", [1.0, 10.0])
def test_spider3_amplitude_matches_numerics(n, J):
    t = default_grid()
    got = cf.spider3_center_prob(n, J, t)
    assert np.abs(got - numeric_center(build_spider(n, 3, J), t)).max() < 1e-10


def test_spider3_amplitude_imaginary():
    a = cf.spider3_center_amplitude(3, 2.0, np.linspace(0, 5, 11))
    assert np.all(a.real == 0)
    assert cf.spider3_center_amplitude(3, 2.0, 0.0) == 0


def test_spider3_large_J():
    assert cf.spider3_center_prob_large_J(3, 10, math.pi / 2) == pytest.approx(1 / 900, rel=1e-14)
    assert cf.spider3_center_prob_large_J(3, 10, 0.0) == 0.0
    t = default_grid()
    exact_max = cf.spider3_center_prob(3, 10, t).max()
    assert abs(exact_max - 1 / 900) / exact_max < 0.15


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_large_J_ratio_band(n):
    g = build_spider(n, 2, 10.0)
    _, exact = trace_maximum(plan(g, "adjacency", basis_state(g, 1)), g.center)
    ratio = exact / (4 / (n * n * 100))
    assert 0.9 <= ratio <= 1.0


def test_probabilities_in_unit_interval():
    t = np.linspace(0, 50, 5001)
    for f in (cf.star_center_prob, cf.spider2_center_prob, cf.spider3_center_prob):
        for n in (1, 3):
            v = f(n, 1.0, t)
            assert v.min() >= 0 and v.max() <= 1
    # the asymptotic forms are probabilities only in their large-J regime
    for f in (cf.spider2_center_prob_large_J, cf.spider3_center_prob_large_J):
        for n in (1, 3):
            v = f(n, 10.0, t)
            assert v.min() >= 0 and v.max() <= 1


def test_validity_flag():
    assert cf.large_J_valid(10)
    assert not cf.large_J_valid(2)
