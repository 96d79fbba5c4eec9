"""Closed-form center-vertex probabilities for stars and spiders.

All functions take the branch count ``n``, the central hopping ``J`` and a
time (scalar or array) and assume the walk starts on leaf ``|1>`` and is
generated by the adjacency matrix. The ``*_large_J`` variants are the
leading-order forms for ``J >> 1``; they are defined for any ``J`` but only
meaningful when :func:`large_J_valid` holds.
"""
from __future__ import annotations

import numpy as np

from .spectral import spider3_coefficients

LARGE_J_THRESHOLD = 10.0


def large_J_valid(J: float) -> bool:
    return J >= LARGE_J_THRESHOLD


def star_center_prob(n, J, t):
    return np.sin(J * np.sqrt(n) * np.asarray(t, dtype=float)) ** 2 / n


def spider2_center_prob(n, J, t):
    r = np.sqrt(1.0 + n * J * J)
    # half-angle sin^4 form kept as is: no cancellation near the zeros
    return 4.0 * J * J / (1.0 + n * J * J) ** 2 * np.sin(0.5 * np.asarray(t, dtype=float) * r) ** 4


def spider2_center_prob_large_J(n, J, t):
    return 4.0 / (n * n * J * J) * np.sin(J * np.asarray(t, dtype=float) * np.sqrt(n) / 2.0) ** 4


def spider3_center_amplitude(n, J, t):
    """Center amplitude ``-2i sum_s alpha_s delta_s sin(Lambda_s t)`` on ``S_{n,3}``.

    The coefficients are the real eigenvector components from
    :func:`treewalk.spectral.spider3_coefficients`, so the ``-`` branch
    product ``alpha delta`` is negative.
    """
    c = spider3_coefficients(n, J)
    t = np.asarray(t, dtype=float)
    total = (
        c.alpha[0] * c.delta[0] * np.sin(c.lambda_plus * t)
        + c.alpha[1] * c.delta[1] * np.sin(c.lambda_minus * t)
    )
    return -2j * total


def spider3_center_prob(n, J, t):
    return np.abs(spider3_center_amplitude(n, J, t)) ** 2


def spider3_center_prob_large_J(n, J, t):
    return np.sin(np.asarray(t, dtype=float)) ** 2 / (n * n * J * J)


CLOSED_FORMS = {
    "star_exact": star_center_prob,
    "spider2_exact": spider2_center_prob,
    "spider2_largeJ": spider2_center_prob_large_J,
    "spider3_amplitude": spider3_center_amplitude,
    "spider3_largeJ": spider3_center_prob_large_J,
}
