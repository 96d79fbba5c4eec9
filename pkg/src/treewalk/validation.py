"""Input checks shared by the estimator front end.

scikit-learn's ``check_array`` refuses complex input, so walker states get
their own helper.
"""
import numpy as np

from .exceptions import InvalidSpecError
from .graphs import WeightedGraph, generator_matrix
from .spectral import SYMMETRY_TOL


def check_operator(X, generator="adjacency"):
    """Return a real symmetric generator from a graph or a square matrix."""
    if isinstance(X, WeightedGraph):
        return generator_matrix(X, generator)
    M = np.asarray(X)
    if np.iscomplexobj(M):
        if np.abs(M.imag).max(initial=0.0) > 0:
            raise InvalidSpecError("operator must be real")
        M = M.real
    M = M.astype(float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise InvalidSpecError(f"operator must be a non-empty square matrix, got {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidSpecError("operator has non-finite entries")
    if np.abs(M - M.T).max() > SYMMETRY_TOL:
        raise InvalidSpecError("operator must be symmetric")
    if generator == "laplacian":
        M = M - np.diag(M.sum(axis=1))
    elif generator != "adjacency":
        raise InvalidSpecError(f"unknown generator {generator!r}")
    return M


def check_states(X, num_vertices, tol=1e-12):
    """Validate a batch of walker states, shape ``(n_states, num_vertices)``."""
    S = np.asarray(X, dtype=complex)
    if S.ndim == 1:
        S = S[None, :]
    if S.ndim != 2 or S.shape[1] != num_vertices:
        raise InvalidSpecError(f"states must have shape (n, {num_vertices}), got {S.shape}")
    if not np.all(np.isfinite(S)):
        raise InvalidSpecError("states have non-finite entries")
    norms = np.sum(np.abs(S) ** 2, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > tol)
    if bad.size:
        raise InvalidSpecError(f"state {bad[0]} has squared norm {norms[bad[0]]!r}")
    return S


def check_times(times):
    t = np.asarray(times, dtype=float).ravel()
    if t.size == 0 or (t.size > 1 and np.any(np.diff(t) <= 0)):
        raise InvalidSpecError("times must be a non-empty ascending grid")
    return t
