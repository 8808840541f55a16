"""q-deformed integers, factorials and binomials, and the process parameters."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ProcessParams:
    """Parameters (q, theta, tau) of a q-Meixner family.

    ``q`` must lie in the open interval (-1, 1) and ``tau`` must be
    nonnegative. The boundary cases q = -1 and q = 1 are only reachable
    through the test oracles in :mod:`qmeixner.spectra`.
    """

    q: float
    theta: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        if not -1.0 < self.q < 1.0:
            raise ValueError(f"q must satisfy -1 < q < 1, got {self.q!r}")
        if not self.tau >= 0.0:
            raise ValueError(f"tau must be nonnegative, got {self.tau!r}")
        if not np.isfinite(self.theta):
            raise ValueError(f"theta must be finite, got {self.theta!r}")


def _check_q(q):
    if not -1.0 < q <= 1.0:
        raise ValueError(f"q must lie in (-1, 1], got {q!r}")


def q_bracket(n: int, q: float) -> float:
    """Return ``[n]_q = 1 + q + ... + q**(n-1)``.

    Evaluated as the explicit sum, so q = 1 gives ``n`` exactly.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    _check_q(q)
    total = 0.0
    power = 1.0
    for _ in range(n):
        total += power
        power *= q
    return total


def q_brackets(n_max: int, q: float) -> np.ndarray:
    """Vector ``([0]_q, [1]_q, ..., [n_max]_q)``, same summation order as q_bracket."""
    _check_q(q)
    out = np.empty(n_max + 1)
    total = 0.0
    power = 1.0
    out[0] = 0.0
    for n in range(1, n_max + 1):
        total += power
        power *= q
        out[n] = total
    return out


def q_factorial(n: int, q: float) -> float:
    """Return ``[n]_q! = [1]_q [2]_q ... [n]_q`` with ``[0]_q! = 1``."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    out = 1.0
    for k in range(1, n + 1):
        out *= q_bracket(k, q)
    return out


def q_binomial(n: int, k: int, q: float) -> float:
    """Gaussian binomial ``[n]_q! / ([k]_q! [n-k]_q!)``.

    Raises
    ------
    ValueError
        If ``k`` is outside ``0..n``.
    """
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"q_binomial requires 0 <= k <= n, got n={n}, k={k}")
    return q_factorial(n, q) / (q_factorial(k, q) * q_factorial(n - k, q))
