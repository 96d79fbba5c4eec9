"""Unitary walker evolution, probability traces and integrator oracles."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.linalg import expm
from scipy.optimize import minimize_scalar

from .exceptions import InvalidSpecError
from .graphs import WeightedGraph, generator_matrix, validate_state
from .spectral import SpectralDecomposition, eigh

DEFAULT_T_MAX = 10 * math.pi
DEFAULT_POINTS = 10001


def default_grid(t_max: float = DEFAULT_T_MAX, num: int = DEFAULT_POINTS) -> np.ndarray:
    return np.linspace(0.0, t_max, num)


@dataclass(frozen=True)
class EvolutionPlan:
    """Spectral data of a generator plus the initial-state overlaps."""

    generator: str
    decomposition: SpectralDecomposition
    overlaps: np.ndarray

    @property
    def num_vertices(self) -> int:
        return self.overlaps.shape[0]

    def amplitudes(self, vertices, times) -> np.ndarray:
        """Amplitudes ``<v|psi(t)>``, shape ``(len(vertices), len(times))``."""
        rows = np.asarray(vertices, dtype=int) - 1
        phases = np.exp(-1j * np.outer(self.decomposition.eigenvalues, np.asarray(times, float)))
        return self.decomposition.eigenvectors[rows] @ (self.overlaps[:, None] * phases)


@dataclass(frozen=True)
class TraceSeries:
    """Per-vertex probabilities on a time grid.

    ``probabilities[k]`` belongs to vertex ``vertices[k]`` (1-based);
    ``cumulative`` has the same layout when present.
    """

    times: np.ndarray
    vertices: tuple[int, ...]
    probabilities: np.ndarray
    cumulative: np.ndarray | None = None

    def _row(self, v):
        try:
            return self.vertices.index(v)
        except ValueError:
            raise InvalidSpecError(f"vertex {v} not in trace") from None

    def probability(self, v: int) -> np.ndarray:
        return self.probabilities[self._row(v)]

    def cumulative_of(self, v: int) -> np.ndarray:
        if self.cumulative is None:
            raise InvalidSpecError("trace has no cumulative integral")
        return self.cumulative[self._row(v)]

    def with_cumulative(self) -> "TraceSeries":
        cum = cumulative_trapezoid(self.probabilities, self.times, axis=1, initial=0.0)
        return TraceSeries(self.times, self.vertices, self.probabilities, cum)


def _check_grid(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise InvalidSpecError("time grid must be a non-empty 1-D array")
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise InvalidSpecError("time grid must be strictly ascending")
    return times


def _check_vertices(vertices, n):
    vertices = tuple(int(v) for v in vertices)
    for v in vertices:
        if not 1 <= v <= n:
            raise InvalidSpecError(f"vertex {v} outside 1..{n}")
    return vertices


def plan(g: WeightedGraph, generator: str, psi0) -> EvolutionPlan:
    G = generator_matrix(g, generator)
    psi0 = validate_state(psi0, g.num_vertices)
    decomposition = eigh(G)
    overlaps = decomposition.eigenvectors.T @ psi0
    return EvolutionPlan(generator, decomposition, overlaps)


def evolve(p: EvolutionPlan, t: float) -> np.ndarray:
    V = p.decomposition.eigenvectors
    return V @ (np.exp(-1j * p.decomposition.eigenvalues * t) * p.overlaps)


def probability_trace(p: EvolutionPlan, vertices, times, cumulative: bool = False) -> TraceSeries:
    times = _check_grid(times)
    vertices = _check_vertices(vertices, p.num_vertices)
    probs = np.abs(p.amplitudes(vertices, times)) ** 2
    series = TraceSeries(times, vertices, np.clip(probs, 0.0, 1.0))
    return series.with_cumulative() if cumulative else series


def trace_maximum(p: EvolutionPlan, vertex: int, times=None) -> tuple[float, float]:
    """Maximum of ``P_vertex(t)`` over the grid, refined by golden-section search.

    Returns ``(t_max, P_max)``.
    """
    times = default_grid() if times is None else _check_grid(times)
    probs = probability_trace(p, [vertex], times).probabilities[0]
    k = int(np.argmax(probs))
    best_t, best_p = float(times[k]), float(probs[k])
    if 0 < k < times.size - 1 and probs[k - 1] < best_p and probs[k + 1] < best_p:

        def neg(t):
            return -float(np.abs(p.amplitudes([vertex], [t])[0, 0]) ** 2)

        res = minimize_scalar(
            neg, bracket=(times[k - 1], times[k], times[k + 1]), method="golden", tol=1e-12
        )
        if times[k - 1] <= res.x <= times[k + 1] and -res.fun > best_p:
            best_t, best_p = float(res.x), float(-res.fun)
    return best_t, best_p


def schrodinger_rk4(g: WeightedGraph, generator: str, psi0, dt: float, t_max: float):
    """Classical RK4 integration of ``d psi/dt = -i G psi``.

    Returns the full-vertex :class:`TraceSeries` and the final state.
    """
    if not dt > 0:
        raise InvalidSpecError("dt must be positive")
    G = generator_matrix(g, generator)
    psi = validate_state(psi0, g.num_vertices).copy()
    steps = int(round(t_max / dt))
    M = -1j * G
    probs = np.empty((g.num_vertices, steps + 1))
    probs[:, 0] = np.abs(psi) ** 2
    for s in range(1, steps + 1):
        k1 = M @ psi
        k2 = M @ (psi + 0.5 * dt * k1)
        k3 = M @ (psi + 0.5 * dt * k2)
        k4 = M @ (psi + dt * k3)
        psi = psi + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        probs[:, s] = np.abs(psi) ** 2
    times = np.arange(steps + 1) * dt
    vertices = tuple(range(1, g.num_vertices + 1))
    return TraceSeries(times, vertices, probs), psi


def expm_trace(g: WeightedGraph, generator: str, psi0, times) -> TraceSeries:
    """Full-vertex trace from ``exp(-i G t) psi0`` evaluated at every time.

    Uses scipy's scaling-and-squaring Pade exponential; independent of the
    eigensolver and of RK4.
    """
    times = _check_grid(times)
    G = generator_matrix(g, generator)
    psi0 = validate_state(psi0, g.num_vertices)
    probs = np.empty((g.num_vertices, times.size))
    for k, t in enumerate(times):
        probs[:, k] = np.abs(expm(-1j * t * G) @ psi0) ** 2
    return TraceSeries(times, tuple(range(1, g.num_vertices + 1)), probs)


def transfer_scaling(build, J_list, state, times=None, vertex=None, workers: int = 1):
    """Maximum center probability as a function of the central hopping.

    ``build(J)`` returns a graph and ``state(g)`` its initial state. Results
    come back as ``[(J, max P), ...]`` in the order of ``J_list``.
    """
    J_list = list(J_list)
    if not J_list:
        raise InvalidSpecError("J_list must not be empty")
    times = default_grid() if times is None else times

    def one(J):
        g = build(J)
        v = g.center if vertex is None else vertex
        return float(J), trace_maximum(plan(g, "adjacency", state(g)), v, times)[1]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, J_list))
    return [one(J) for J in J_list]


def loglog_slope(points) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    x, y = np.asarray(points, dtype=float).T
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])
