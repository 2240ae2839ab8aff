"""Scalar sequence bounds behind the O(1/k) upper and lower rate statements."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

M2_GRID = (0.0, 1.0, 10.0, 1e2, 1e3, 1e4, 1e5, 1e6)


@dataclass(frozen=True)
class SequenceBoundParams:
    """Constants of ``d_{k+1} <= d_k - eps1 (1 - sqrt(1 - eps2 d_k))^2 + alpha/k^2``."""

    eps1: float
    eps2: float
    alpha: float = 0.0

    @property
    def eps_bar(self):
        return 0.25 * self.eps1 * self.eps2 ** 2

    def admissible(self, delta1):
        """Whether ``eps2 * delta1 < 1``."""
        return self.eps2 * delta1 < 1


def seq_upper_bound(delta0, eps_bar, k):
    """``1 / (1/delta0 + eps_bar * k)``."""
    if not delta0 > 0:
        raise ValueError("delta0 must be positive")
    return 1.0 / (1.0 / delta0 + eps_bar * np.asarray(k, dtype=float))


def seq_lower_bound(k, p, gamma, M2):
    """``(2 p gamma (k + M2)) ** (-1/p)``."""
    if p < 1 or not gamma > 0:
        raise ValueError("need p >= 1 and gamma > 0")
    return (2.0 * p * gamma * (np.asarray(k, dtype=float) + M2)) ** (-1.0 / p)


def worst_case_sequence(delta0, eps_bar, K):
    """``d_{k+1} = d_k - eps_bar d_k^2`` for ``k < K``, as an array of length ``K + 1``."""
    d = np.empty(K + 1)
    d[0] = delta0
    for k in range(K):
        d[k + 1] = d[k] - eps_bar * d[k] ** 2
    return d


def search_M2(alphas, p, gamma, grid=M2_GRID, k0=1):
    """Smallest ``M2`` in ``grid`` with ``alphas[i] >= seq_lower_bound(k0 + i, ...)``.

    Returns ``None`` when no grid value works.
    """
    alphas = np.asarray(alphas, dtype=float)
    ks = k0 + np.arange(alphas.size)
    for M2 in grid:
        if np.all(alphas >= seq_lower_bound(ks, p, gamma, M2)):
            return M2
    return None


def haugazeau_eps_bar(mu, kappa, grad_norm_star):
    """``eps_bar`` values for the Haugazeau rate bound.

    With ``g = ||f'(x*)||`` and ``eps1 = g / (2 kappa^2 mu)``:

    * ``"A"`` takes ``eps2 = 2 mu / g**2``, giving ``mu / (2 kappa^2 g^3)``;
    * ``"B"`` takes ``eps2 = 2 mu / g``, giving ``mu / (2 kappa^2 g)``;
    * ``"rederived"`` rewrites the per-step decrease
      ``(g - sqrt(g^2 - 2 mu d))^2 / (2 kappa^2 mu)`` as
      ``eps1' (1 - sqrt(1 - eps2' d))^2`` with ``eps1' = g^2/(2 kappa^2 mu)``
      and ``eps2' = 2 mu / g^2``, giving ``mu / (2 kappa^2 g^2)``.
    """
    g = grad_norm_star
    eps1 = g / (2 * kappa ** 2 * mu)
    return {
        "A": SequenceBoundParams(eps1, 2 * mu / g ** 2).eps_bar,
        "B": SequenceBoundParams(eps1, 2 * mu / g).eps_bar,
        "rederived": SequenceBoundParams(g ** 2 / (2 * kappa ** 2 * mu), 2 * mu / g ** 2).eps_bar,
    }
