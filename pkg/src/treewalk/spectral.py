"""Real symmetric eigendecomposition and the analytic tree-graph spectra."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, InvalidSpecError

SYMMETRY_TOL = 1e-12
TIE_TOL = 1e-12


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues with eigenvectors stored as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def residual(self, M) -> float:
        M = np.asarray(M, dtype=float)
        R = M @ self.eigenvectors - self.eigenvectors * self.eigenvalues
        return float(np.abs(R).max()) if R.size else 0.0

    def orthonormality_error(self) -> float:
        V = self.eigenvectors
        return float(np.abs(V.T @ V - np.eye(V.shape[1])).max()) if V.size else 0.0


def _rotate(a, v, p, q):
    apq = float(a[p, q])
    diff = float(a[q, q] - a[p, p])
    if abs(diff) + 100.0 * abs(apq) == abs(diff):
        # theta^2 would overflow; t ~ 1 / (2 theta)
        t = apq / diff
    else:
        theta = diff / (2.0 * apq)
        t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    app = a[p, p] - t * apq
    aqq = a[q, q] + t * apq

    col_p = a[:, p].copy()
    col_q = a[:, q]
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :]
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    a[p, p] = app
    a[q, q] = aqq
    a[p, q] = a[q, p] = 0.0

    vp = v[:, p].copy()
    vq = v[:, q]
    v[:, p] = c * vp - s * vq
    v[:, q] = s * vp + c * vq


def _off_norm(a):
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return float(np.sqrt(np.dot(off, off)))


def _order(eigenvalues, eigenvectors):
    idx = list(np.argsort(eigenvalues, kind="stable"))
    # group numerically tied eigenvalues, then order each group by the sign
    # and magnitude of the first eigenvector component
    ordered = []
    group = [idx[0]] if idx else []
    for k in idx[1:]:
        if abs(eigenvalues[k] - eigenvalues[group[-1]]) < TIE_TOL:
            group.append(k)
        else:
            ordered.extend(_tie_break(group, eigenvectors))
            group = [k]
    ordered.extend(_tie_break(group, eigenvectors))
    return np.array(ordered, dtype=int)


def _tie_break(group, eigenvectors):
    if len(group) < 2:
        return group
    first = eigenvectors[0]
    return sorted(group, key=lambda k: (-np.sign(first[k]), -abs(first[k]), k))


def eigh(M, tol: float = 1e-14, max_sweeps: int = 100) -> SpectralDecomposition:
    """Cyclic Jacobi eigendecomposition of a real symmetric matrix.

    Sweeps visit the pairs ``(p, q)``, ``p < q``, in row order and stop once
    the off-diagonal Frobenius norm drops below ``tol * ||M||_F``.

    Raises
    ------
    InvalidSpecError
        If ``M`` is not square, not finite or not symmetric within 1e-12.
    ConvergenceError
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidSpecError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidSpecError("matrix has non-finite entries")
    if tol <= 0:
        raise InvalidSpecError("tol must be positive")
    asym = float(np.abs(M - M.T).max()) if M.size else 0.0
    if asym > SYMMETRY_TOL:
        raise InvalidSpecError(f"matrix is not symmetric (max asymmetry {asym:.3e})")

    n = M.shape[0]
    a = 0.5 * (M + M.T)
    v = np.eye(n)
    threshold = tol * float(np.linalg.norm(a))
    off = _off_norm(a)
    sweeps = 0
    while off > threshold:
        if sweeps == max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})",
                off,
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] != 0.0:
                    _rotate(a, v, p, q)
        sweeps += 1
        off = _off_norm(a)

    w = np.diag(a).copy()
    order = _order(w, v)
    return SpectralDecomposition(w[order], v[:, order])


# -- analytic spectra ---------------------------------------------------------


def analytic_spectrum_star(n: int, J: float) -> np.ndarray:
    r = math.sqrt(n) * J
    return np.sort(np.array([0.0] * (n - 1) + [r, -r]))


def analytic_spectrum_spider2(n: int, J: float) -> np.ndarray:
    r = math.sqrt(1 + n * J * J)
    return np.sort(np.array([1.0] * (n - 1) + [-1.0] * (n - 1) + [0.0, r, -r]))


def analytic_spectrum_spider3(n: int, J: float) -> np.ndarray:
    c = spider3_coefficients(n, J)
    lp, lm = c.lambda_plus, c.lambda_minus
    s2 = math.sqrt(2.0)
    return np.sort(
        np.array([0.0] * (n - 1) + [s2] * (n - 1) + [-s2] * (n - 1) + [lp, -lp, lm, -lm])
    )


@dataclass(frozen=True)
class Spider3Coefficients:
    """Center-coupled eigenvectors of ``S_{n,3}``.

    Each pair holds the ``+`` and ``-`` branch value. The eigenvector of
    ``+Lambda`` repeats ``(alpha, beta, gamma)`` on every branch and ends in
    ``delta``; the one of ``-Lambda`` flips the sign of ``alpha`` and
    ``gamma``. All values are real; the ``-`` branch is phase-fixed so that
    ``alpha > 0``, which makes its ``delta`` negative.
    """

    n: int
    J: float
    lambda_plus: float
    lambda_minus: float
    alpha: tuple[float, float]
    beta: tuple[float, float]
    gamma: tuple[float, float]
    delta: tuple[float, float]

    def eigenvector(self, branch: str, sign: int = 1) -> np.ndarray:
        k = 0 if branch == "+" else 1
        a, b, g, d = self.alpha[k], self.beta[k], self.gamma[k], self.delta[k]
        if sign < 0:
            a, g = -a, -g
        return np.array([a, b, g] * self.n + [d])

    def eigenvalue(self, branch: str, sign: int = 1) -> float:
        lam = self.lambda_plus if branch == "+" else self.lambda_minus
        return lam if sign > 0 else -lam


def spider3_coefficients(n: int, J: float) -> Spider3Coefficients:
    """Closed-form eigenpairs of ``S_{n,3}`` that overlap the center vertex.

    The textbook radicals are evaluated with complex principal roots: for
    the ``-`` branch ``n J^2 - s`` and ``n J^2 - 2 - s`` are negative
    (``s = sqrt(n^2 J^4 + 4)``), so the raw vector is ``i`` times a real
    eigenvector. That global phase is removed before returning.
    """
    if int(n) != n or n < 1:
        raise InvalidSpecError(f"n must be a positive integer, got {n}")
    if not J > 0:
        raise InvalidSpecError(f"J must be positive, got {J}")
    nJ2 = n * J * J
    s = math.sqrt(n * n * J**4 + 4.0)
    q = math.sqrt(s)  # fourth root of n^2 J^4 + 4
    lam, al, be, ga, de = [], [], [], [], []
    for sg in (1.0, -1.0):
        # nJ^2 - s == -4 / (nJ^2 + s): same value without the cancellation
        u = nJ2 + s if sg > 0 else -4.0 / (nJ2 + s)
        lam2 = (u + 2.0) / 2.0
        assert lam2 > 0, "eigenvalue radicand must be positive"
        raw = (
            1.0 / (q * cmath.sqrt(n * u)),
            J / (q * cmath.sqrt(u - 2.0)),
            cmath.sqrt(u) / (2.0 * math.sqrt(n) * q),
            cmath.sqrt(u - 2.0) / (2.0 * q),
        )
        phase = raw[0] / abs(raw[0])
        a, b, g, d = (complex(x / phase) for x in raw)
        for x in (a, b, g, d):
            assert abs(x.imag) <= 1e-12 * max(1.0, abs(x)), "coefficients not co-phased"
        lam.append(math.sqrt(lam2))
        al.append(a.real)
        be.append(b.real)
        ga.append(g.real)
        de.append(d.real)
    return Spider3Coefficients(
        n, float(J), lam[0], lam[1], tuple(al), tuple(be), tuple(ga), tuple(de)
    )
