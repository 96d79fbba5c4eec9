"""Quantum stochastic walks: Lindblad evolution of a density matrix.

The generator interpolates between the coherent commutator with the
adjacency matrix (weight ``1 - omega``) and a dissipator built from one
jump operator ``sqrt(|A_ij|) |i><j|`` per ordered pair of adjacent
vertices (weight ``omega``).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .dynamics import TraceSeries
from .exceptions import InvalidSpecError, InvariantViolation
from .graphs import WeightedGraph, adjacency

log = logging.getLogger(__name__)

FORMS = ("paper", "standard")
TRACE_TOL = 1e-8
HERMITIAN_TOL = 1e-10
POSITIVITY_TOL = 1e-6


@dataclass(frozen=True)
class LindbladSet:
    """Jump operators ``sqrt(rate) |target><source|`` (1-based vertices)."""

    targets: np.ndarray
    sources: np.ndarray
    rates: np.ndarray
    omega: float

    def __len__(self):
        return int(self.rates.size)

    def operators(self, num_vertices: int) -> list[np.ndarray]:
        """Dense jump operators, mostly useful for cross-checks."""
        ops = []
        for i, j, r in zip(self.targets, self.sources, self.rates):
            L = np.zeros((num_vertices, num_vertices))
            L[i - 1, j - 1] = np.sqrt(r)
            ops.append(L)
        return ops


def build_lindblad_set(g: WeightedGraph, omega: float) -> LindbladSet:
    if not 0.0 <= omega <= 1.0:
        raise InvalidSpecError(f"omega must lie in [0, 1], got {omega}")
    targets, sources, rates = [], [], []
    for i, j, w in g.edges:
        for a, b in ((i, j), (j, i)):
            targets.append(a)
            sources.append(b)
            rates.append(abs(w))
    return LindbladSet(
        np.array(targets, dtype=int), np.array(sources, dtype=int), np.array(rates), float(omega)
    )


class _Rhs:
    def __init__(self, A, lset: LindbladSet, form: str):
        if form not in FORMS:
            raise InvalidSpecError(f"unknown dissipator form {form!r}")
        n = A.shape[0]
        self.n = n
        self.A = A
        self.coherent = 1.0 - lset.omega
        self.omega = lset.omega
        self.t0 = lset.targets - 1
        self.s0 = lset.sources - 1
        self.rates = lset.rates
        # sum_k L_k L_k^dag (paper) or L_k^dag L_k (standard) is diagonal here
        anchor = self.t0 if form == "paper" else self.s0
        self.decay = np.bincount(anchor, weights=self.rates, minlength=n)

    def __call__(self, rho):
        out = -1j * self.coherent * (self.A @ rho - rho @ self.A)
        if self.omega:
            pops = np.real(np.diagonal(rho))
            gain = np.bincount(self.t0, weights=self.rates * pops[self.s0], minlength=self.n)
            diss = -0.5 * (self.decay[:, None] * rho + rho * self.decay[None, :])
            diss[np.diag_indices(self.n)] += gain
            out += self.omega * diss
        return out


def lindblad_rhs(rho, g: WeightedGraph, lset: LindbladSet, form: str = "paper") -> np.ndarray:
    A = adjacency(g)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != A.shape:
        raise InvalidSpecError(f"rho has shape {rho.shape}, graph needs {A.shape}")
    return _Rhs(A, lset, form)(rho)


def pure_density(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


@dataclass(frozen=True)
class DensityEvolution:
    """Result of :func:`evolve_density`.

    ``series`` holds the diagonal for every vertex; ``trace_errors`` the
    value of ``|tr rho - 1|`` at every recorded step.
    """

    series: TraceSeries
    final: np.ndarray
    trace_errors: np.ndarray
    max_asymmetry: float
    min_eigenvalue: float
    omega: float
    form: str
    dt: float


def evolve_density(
    g: WeightedGraph,
    lset: LindbladSet,
    rho0,
    dt: float,
    t_max: float,
    form: str = "paper",
    check_every: int = 100,
) -> DensityEvolution:
    """Integrate the master equation with the classical four-stage RK4.

    After each step the state is symmetrized, ``rho <- (rho + rho^dag)/2``;
    the largest correction applied is reported as ``max_asymmetry``.

    Raises
    ------
    InvariantViolation
        If the trace drifts by more than 1e-8, the pre-symmetrization
        asymmetry exceeds 1e-10, or a checkpoint eigenvalue falls below -1e-6.
    """
    if not dt > 0:
        raise InvalidSpecError("dt must be positive")
    A = adjacency(g)
    n = A.shape[0]
    rho = np.array(rho0, dtype=complex)
    if rho.shape != (n, n):
        raise InvalidSpecError(f"rho0 has shape {rho.shape}, graph needs {(n, n)}")
    if np.abs(rho - rho.conj().T).max() > HERMITIAN_TOL:
        raise InvalidSpecError("rho0 is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > TRACE_TOL:
        raise InvalidSpecError("rho0 does not have unit trace")
    f = _Rhs(A, lset, form)
    steps = int(round(t_max / dt))
    probs = np.empty((n, steps + 1))
    trace_err = np.empty(steps + 1)
    probs[:, 0] = np.real(np.diagonal(rho))
    trace_err[0] = abs(np.trace(rho) - 1.0)
    max_asym = 0.0
    min_eig = float(np.linalg.eigvalsh(rho)[0])
    half = 0.5 * dt
    for s in range(1, steps + 1):
        k1 = f(rho)
        k2 = f(rho + half * k1)
        k3 = f(rho + half * k2)
        k4 = f(rho + dt * k3)
        rho = rho + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        asym = float(np.abs(rho - rho.conj().T).max())
        max_asym = max(max_asym, asym)
        rho = 0.5 * (rho + rho.conj().T)
        t = s * dt
        err = abs(np.trace(rho) - 1.0)
        trace_err[s] = err
        probs[:, s] = np.real(np.diagonal(rho))
        if err > TRACE_TOL:
            raise InvariantViolation(f"trace error {err:.3e} at t={t:.6g}")
        if asym > HERMITIAN_TOL:
            raise InvariantViolation(f"Hermiticity lost ({asym:.3e}) at t={t:.6g}")
        if s % check_every == 0 or s == steps:
            ev = float(np.linalg.eigvalsh(rho)[0])
            min_eig = min(min_eig, ev)
            if ev < -POSITIVITY_TOL:
                raise InvariantViolation(
                    f"negative eigenvalue {ev:.3e} at t={t:.6g} (trace error {err:.3e})"
                )
    log.debug("omega=%g form=%s max symmetrization correction %.3e", lset.omega, form, max_asym)
    times = np.arange(steps + 1) * dt
    series = TraceSeries(times, tuple(range(1, n + 1)), np.clip(probs, 0.0, 1.0))
    return DensityEvolution(series, rho, trace_err, max_asym, min_eig, lset.omega, form, dt)


def cumulative_center_probability(series: TraceSeries, tau: float, vertex: int | None = None) -> float:
    """Trapezoid integral of ``P_vertex`` over ``[t_0, tau]``.

    ``vertex`` defaults to the highest-numbered vertex in the series, which
    is the center for every family graph. A ``tau`` between grid points
    adds the linearly interpolated partial panel.
    """
    t = series.times
    if not t[0] <= tau <= t[-1] + 1e-12 * max(1.0, abs(t[-1])):
        raise InvalidSpecError(f"tau={tau} outside [{t[0]}, {t[-1]}]")
    v = max(series.vertices) if vertex is None else vertex
    p = series.probability(v)
    k = int(np.searchsorted(t, tau, side="right"))
    total = float(trapezoid(p[:k], t[:k])) if k > 1 else 0.0
    if k < t.size and tau > t[k - 1]:
        frac = (tau - t[k - 1]) / (t[k] - t[k - 1])
        p_tau = p[k - 1] + frac * (p[k] - p[k - 1])
        total += 0.5 * (p[k - 1] + p_tau) * (tau - t[k - 1])
    return total
