"""scikit-learn style front end.

``fit`` takes the walk arena (a :class:`~treewalk.graphs.WeightedGraph` or
a symmetric weight matrix); ``transform`` maps a batch of initial states
to probability traces of one vertex, one row per state::

    >>> walk = ContinuousTimeQuantumWalk(times=np.linspace(0, 5, 51))
    >>> P = walk.fit(build_spider(3, 2, 10.0)).transform(states)   # doctest: +SKIP

Hyperparameters live in ``__init__`` so ``get_params``/``set_params`` and
``sklearn.base.clone`` work as for any estimator.
"""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .dynamics import EvolutionPlan, default_grid
from .graphs import WeightedGraph
from .open_system import FORMS, LindbladSet, _Rhs, evolve_density, pure_density
from .spectral import eigh
from .validation import check_operator, check_states, check_times
from .exceptions import InvalidSpecError


def _default_vertex(X, n):
    if isinstance(X, WeightedGraph) and X.center is not None:
        return X.center
    return n


class ContinuousTimeQuantumWalk(TransformerMixin, BaseEstimator):
    """Unitary walk ``exp(-i G t)`` with ``G`` the adjacency or Laplacian.

    Parameters
    ----------
    generator : {"adjacency", "laplacian"}
    times : array-like, optional
        Evaluation grid; defaults to 10001 points on ``[0, 10 pi]``.
    vertex : int, optional
        1-based vertex whose probability ``transform`` reports; defaults to
        the graph center (or the last vertex for bare matrices).

    Attributes
    ----------
    operator_ : ndarray
    decomposition_ : SpectralDecomposition
    vertex_ : int
    """

    def __init__(self, generator="adjacency", times=None, vertex=None):
        self.generator = generator
        self.times = times
        self.vertex = vertex

    def fit(self, X, y=None):
        self.operator_ = check_operator(X, self.generator)
        self.n_vertices_ = self.operator_.shape[0]
        self.decomposition_ = eigh(self.operator_)
        self.vertex_ = self.vertex or _default_vertex(X, self.n_vertices_)
        if not 1 <= self.vertex_ <= self.n_vertices_:
            raise InvalidSpecError(f"vertex {self.vertex_} outside the graph")
        self.times_ = default_grid() if self.times is None else check_times(self.times)
        return self

    def plan(self, psi0) -> EvolutionPlan:
        check_is_fitted(self, "decomposition_")
        psi0 = check_states(psi0, self.n_vertices_)[0]
        overlaps = self.decomposition_.eigenvectors.T @ psi0
        return EvolutionPlan(self.generator, self.decomposition_, overlaps)

    def evolve(self, X, t):
        """States at time ``t``, one row per input state."""
        check_is_fitted(self, "decomposition_")
        S = check_states(X, self.n_vertices_)
        V = self.decomposition_.eigenvectors
        phases = np.exp(-1j * self.decomposition_.eigenvalues * t)
        return (S @ V) * phases @ V.T

    def transform(self, X):
        check_is_fitted(self, "decomposition_")
        S = check_states(X, self.n_vertices_)
        w = self.decomposition_.eigenvalues
        V = self.decomposition_.eigenvectors
        row = V[self.vertex_ - 1]
        phases = np.exp(-1j * np.outer(w, self.times_))
        amps = (S @ V * row) @ phases
        return np.clip(np.abs(amps) ** 2, 0.0, 1.0)


class QuantumStochasticWalk(TransformerMixin, BaseEstimator):
    """Lindblad walk on the adjacency matrix, integrated with RK4.

    ``transform`` accepts pure states (rows of amplitudes) and returns the
    probability of ``vertex`` at every step of the ``[0, t_max]`` grid.
    """

    def __init__(self, omega=0.05, dt=math.pi / 1000, t_max=10 * math.pi, dissipator="paper",
                 vertex=None):
        self.omega = omega
        self.dt = dt
        self.t_max = t_max
        self.dissipator = dissipator
        self.vertex = vertex

    def fit(self, X, y=None):
        if self.dissipator not in FORMS:
            raise InvalidSpecError(f"unknown dissipator {self.dissipator!r}")
        if not 0.0 <= self.omega <= 1.0:
            raise InvalidSpecError(f"omega must lie in [0, 1], got {self.omega}")
        A = check_operator(X, "adjacency")
        self.adjacency_ = A
        self.n_vertices_ = A.shape[0]
        edges = [
            (i + 1, j + 1, A[i, j])
            for i in range(self.n_vertices_)
            for j in range(i + 1, self.n_vertices_)
            if A[i, j] != 0
        ]
        self.graph_ = X if isinstance(X, WeightedGraph) else WeightedGraph(self.n_vertices_, tuple(edges))
        t, s, r = [], [], []
        for i, j, w in edges:
            t += [i, j]
            s += [j, i]
            r += [abs(w), abs(w)]
        self.lindblad_set_ = LindbladSet(np.array(t, int), np.array(s, int), np.array(r, float),
                                         float(self.omega))
        self.vertex_ = self.vertex or _default_vertex(X, self.n_vertices_)
        return self

    def rhs(self, rho):
        check_is_fitted(self, "lindblad_set_")
        return _Rhs(self.adjacency_, self.lindblad_set_, self.dissipator)(np.asarray(rho, complex))

    def transform(self, X):
        check_is_fitted(self, "lindblad_set_")
        S = check_states(X, self.n_vertices_)
        rows = []
        for psi in S:
            run = evolve_density(self.graph_, self.lindblad_set_, pure_density(psi), self.dt,
                                 self.t_max, self.dissipator)
            rows.append(run.series.probability(self.vertex_))
        return np.vstack(rows)
