import math

import numpy as np
import pytest

from treewalk.dynamics import plan, probability_trace
from treewalk.exceptions import InvalidSpecError, InvariantViolation
from treewalk.graphs import adjacency, basis_state, build_cayley, build_spider, build_star
from treewalk.open_system import (
    build_lindblad_set,
    cumulative_center_probability,
    evolve_density,
    lindblad_rhs,
    pure_density,
)


def dense_rhs(rho, A, ops, omega, form):
    """Straight transcription of the master equation with dense operators."""
    out = -1j * (1 - omega) * (A @ rho - rho @ A)
    for L in ops:
        Ld = L.conj().T
        anti = L @ Ld if form == "paper" else Ld @ L
        out += omega * (L @ rho @ Ld - 0.5 * (anti @ rho + rho @ anti))
    return out


def random_density(n, rng):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = X @ X.conj().T
    return rho / np.trace(rho)


def test_lindblad_set_shape():
    g = build_spider(3, 2, 10.0)
    lset = build_lindblad_set(g, 0.02)
    assert len(lset) == 12
    pairs = set(zip(lset.targets.tolist(), lset.sources.tolist()))
    assert len(pairs) == 12
    assert (7, 2) in pairs and (2, 7) in pairs
    assert sorted(lset.rates.tolist()) == [1.0] * 6 + [10.0] * 6


@pytest.mark.parametrize("omega", [-0.1, 1.5, float("nan")])
def test_omega_range(omega):
    with pytest.raises(InvalidSpecError):
        build_lindblad_set(build_star(3, 1), omega)


@pytest.mark.parametrize("form", ["paper", "standard"])
@pytest.mark.parametrize("omega", [0.0, 0.03, 0.7, 1.0])
def test_rhs_matches_dense_oracle(form, omega, rng):
    for g in (build_spider(3, 2, 10.0), build_cayley(3, 2, 2.0), build_star(4, 0.5)):
        lset = build_lindblad_set(g, omega)
        rho = random_density(g.num_vertices, rng)
        ops = lset.operators(g.num_vertices)
        want = dense_rhs(rho, adjacency(g), ops, omega, form)
        got = lindblad_rhs(rho, g, lset, form)
        assert np.abs(got - want).max() < 1e-12
        assert abs(np.trace(got)) < 1e-12
        assert np.abs(got - got.conj().T).max() < 1e-12


def test_forms_coincide_for_symmetric_sets(rng):
    g = build_spider(4, 3, 3.0)
    lset = build_lindblad_set(g, 0.4)
    rho = random_density(g.num_vertices, rng)
    np.testing.assert_allclose(lindblad_rhs(rho, g, lset, "paper"),
                               lindblad_rhs(rho, g, lset, "standard"), atol=1e-13)


def test_unknown_form():
    g = build_star(3, 1)
    with pytest.raises(InvalidSpecError):
        lindblad_rhs(pure_density(basis_state(g, 1)), g, build_lindblad_set(g, 0.1), "bogus")


def test_maximally_mixed_is_stationary():
    g = build_spider(3, 2, 10.0)
    n = g.num_vertices
    for omega in (0.0, 0.05, 1.0):
        assert np.abs(lindblad_rhs(np.eye(n) / n, g, build_lindblad_set(g, omega))).max() < 1e-14


def test_pure_dephasing_limit_decays_coherences():
    g = build_star(3, 1.0)
    psi = np.ones(4) / 2
    run = evolve_density(g, build_lindblad_set(g, 1.0), pure_density(psi), 0.01, 20.0)
    off = run.final - np.diag(np.diag(run.final))
    assert np.abs(off).max() < 1e-3
    # classical walk on a star with uniform rates relaxes to the uniform state
    np.testing.assert_allclose(np.diag(run.final).real, 0.25, atol=1e-3)


def test_coherent_limit_tracks_unitary():
    g = build_star(3, 1.0)
    psi = basis_state(g, 1)
    run = evolve_density(g, build_lindblad_set(g, 0.0), pure_density(psi), math.pi / 1000, 5.0)
    ref = probability_trace(plan(g, "adjacency", psi), range(1, 5), run.series.times)
    assert np.abs(run.series.probabilities - ref.probabilities).max() < 1e-7


def test_invariants_reported():
    g = build_spider(3, 2, 10.0)
    run = evolve_density(g, build_lindblad_set(g, 0.05), pure_density(basis_state(g, 1)),
                         math.pi / 1000, 2.0)
    assert run.trace_errors.max() <= 1e-8
    assert run.max_asymmetry <= 1e-10
    assert run.min_eigenvalue >= -1e-6
    assert run.series.probabilities.shape == (7, run.series.times.size)


def test_rk4_fourth_order(rng):
    g = build_spider(3, 2, 2.0)
    lset = build_lindblad_set(g, 0.1)
    rho0 = pure_density(basis_state(g, 1))
    ref = evolve_density(g, lset, rho0, 0.0125, 4.0).final
    e1 = np.abs(evolve_density(g, lset, rho0, 0.1, 4.0).final - ref).max()
    e2 = np.abs(evolve_density(g, lset, rho0, 0.05, 4.0).final - ref).max()
    assert e1 / e2 >= 12


def test_bad_initial_state():
    g = build_star(3, 1)
    lset = build_lindblad_set(g, 0.1)
    with pytest.raises(InvalidSpecError):
        evolve_density(g, lset, 2 * pure_density(basis_state(g, 1)), 0.01, 1.0)
    with pytest.raises(InvalidSpecError):
        evolve_density(g, lset, np.eye(3) / 3, 0.01, 1.0)
    with pytest.raises(InvalidSpecError):
        evolve_density(g, lset, np.eye(4) / 4, 0.0, 1.0)


def test_unstable_step_raises():
    g = build_spider(3, 2, 10.0)
    with pytest.raises(InvariantViolation):
        evolve_density(g, build_lindblad_set(g, 0.5), pure_density(basis_state(g, 1)), 0.5, 20.0)


def test_cumulative_unitary_limit():
    g = build_spider(3, 2, 10.0)
    run = evolve_density(g, build_lindblad_set(g, 0.0), pure_density(basis_state(g, 1)),
                         math.pi / 1000, 10 * math.pi)
    omega_total = cumulative_center_probability(run.series, 10 * math.pi)
    a = math.sqrt(301)
    x = a * 10 * math.pi / 2
    exact = 400 / 90601 * (3 * x / 8 - math.sin(2 * x) / 4 + math.sin(4 * x) / 32) * 2 / a
    assert omega_total == pytest.approx(exact, rel=1e-4)
    assert omega_total == pytest.approx(0.05203, rel=0.01)


def test_cumulative_partial_panel():
    from treewalk.dynamics import TraceSeries

    s = TraceSeries(np.array([0.0, 1.0, 2.0]), (1, 2), np.array([[0, 0, 0], [0.0, 1.0, 1.0]]))
    assert cumulative_center_probability(s, 1.5) == pytest.approx(0.5 + 0.5)
    assert cumulative_center_probability(s, 0.5) == pytest.approx(0.125)
    assert cumulative_center_probability(s, 0.0) == 0.0
    assert cumulative_center_probability(s, 2.0, vertex=1) == 0.0
    with pytest.raises(InvalidSpecError):
        cumulative_center_probability(s, 2.5)
