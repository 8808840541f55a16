"""Monic three-term recurrences of the q-Meixner transition and generator families.

Every family here is written as

    y p_n(y) = p_{n+1}(y) + a_n p_n(y) + b_n p_{n-1}(y),   p_{-1} = 0, p_0 = 1.

The transition family ``Q_n(y | x, s, t)`` has orthogonality measure
``P_{s,t}(x, dy)``; the generator family ``W_n(y; x, t)`` has orthogonality
measure ``nu_{x,t}(dy)``; ``M_n(y; t) = Q_n(y | 0, 0, t)`` are the
martingale polynomials.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidTime, InvalidTimeOrder
from .poly import Poly, mul_by_linear
from .qnum import ProcessParams, q_binomial, q_brackets

MAX_INDEX = 1024
BASIS_CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Recurrence coefficients ``a_n`` (n >= 0) and ``b_n`` (n >= 1).

    ``a_fn`` and ``b_fn`` map an integer array of indices to coefficient
    arrays. ``family`` and ``tag`` record where the coefficients came from.
    """

    a_fn: Callable[[np.ndarray], np.ndarray]
    b_fn: Callable[[np.ndarray], np.ndarray]
    family: str = "custom"
    tag: dict = field(default_factory=dict)

    def _check(self, n):
        if n > MAX_INDEX:
            raise ValueError(f"recurrence index {n} exceeds cap {MAX_INDEX}")

    def a(self, n: int) -> float:
        self._check(n)
        return float(self.a_fn(np.array([n]))[0])

    def b(self, n: int) -> float:
        if n < 1:
            raise ValueError("b_n is defined for n >= 1")
        self._check(n)
        return float(self.b_fn(np.array([n]))[0])

    def arrays(self, n: int):
        """Return ``(a_0..a_{n-1}, b_1..b_{n-1})`` as numpy arrays."""
        self._check(n)
        idx = np.arange(n)
        return self.a_fn(idx), self.b_fn(idx[1:])

    @classmethod
    def constant(cls, a: float, b: float, family="constant"):
        return cls(
            lambda n: np.full(len(n), float(a)),
            lambda n: np.full(len(n), float(b)),
            family=family,
            tag={"a": a, "b": b},
        )


def _bracket_fn(q):
    def brackets(n):
        n = np.asarray(n, dtype=int)
        if n.size == 0:
            return np.zeros(0)
        table = q_brackets(int(max(n.max(), 1)), q)
        return table[n]

    return brackets


def _q_recurrence(params: ProcessParams, x, s, t, family="transition"):
    """Coefficients of ``Q_n(y | x, s, t)`` with no restriction on (s, t)."""
    q, theta, tau = params.q, params.theta, params.tau
    br = _bracket_fn(q)

    def a_fn(n):
        return theta * br(n) + x * np.power(q, n.astype(float))

    def b_fn(n):
        # q**(n-1) at n = 1 is 1 even for q = 0
        return (t - s * np.power(q, (n - 1).astype(float)) + tau * br(n - 1)) * br(n)

    tag = {"q": q, "theta": theta, "tau": tau, "x": x, "s": s, "t": t}
    return RecurrenceCoeffs(a_fn, b_fn, family=family, tag=tag)


def transition_recurrence(params: ProcessParams, x: float, s: float, t: float) -> RecurrenceCoeffs:
    """Recurrence of the transition family; requires ``0 <= s < t``."""
    if not (0.0 <= s < t):
        raise InvalidTimeOrder(f"transition requires 0 <= s < t, got s={s!r}, t={t!r}")
    return _q_recurrence(params, x, s, t)


def nu_recurrence(params: ProcessParams, x: float, t: float) -> RecurrenceCoeffs:
    """Recurrence of the generator family ``W_n(y; x, t)``; requires ``t > 0``."""
    if not t > 0.0:
        raise InvalidTime(f"nu_{{x,t}} requires t > 0, got t={t!r}")
    q, theta, tau = params.q, params.theta, params.tau
    br = _bracket_fn(q)

    def a_fn(n):
        return theta * br(n + 1) + x * np.power(q, (n + 1).astype(float))

    def b_fn(n):
        return ((1.0 - q) * t + tau) * br(n) * br(n + 1)

    tag = {"q": q, "theta": theta, "tau": tau, "x": x, "t": t}
    return RecurrenceCoeffs(a_fn, b_fn, family="nu", tag=tag)


def eval_family(rec: RecurrenceCoeffs, n_max: int, y):
    """Values ``p_0(y), ..., p_{n_max}(y)`` by forward recurrence.

    With array ``y`` the result has shape ``(n_max + 1,) + y.shape``.
    """
    y = np.asarray(y, dtype=float)
    a, b = rec.arrays(n_max + 1)
    out = np.empty((n_max + 1,) + y.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = y - a[0]
    for n in range(1, n_max):
        out[n + 1] = (y - a[n]) * out[n] - b[n - 1] * out[n - 1]
    return out


def family_polys(rec: RecurrenceCoeffs, n: int) -> list[Poly]:
    """Polynomials ``p_0, ..., p_n`` of the family as :class:`Poly` objects."""
    a, b = rec.arrays(n + 1)
    polys = [Poly.constant(1.0)]
    if n >= 1:
        polys.append(mul_by_linear(polys[0], a[0]))
    for k in range(1, n):
        polys.append(mul_by_linear(polys[k], a[k]) - b[k - 1] * polys[k - 1])
    return polys


def family_poly(rec: RecurrenceCoeffs, n: int) -> Poly:
    return family_polys(rec, n)[n]


def martingale_recurrence(params: ProcessParams, t):
    return _q_recurrence(params, 0.0, 0.0, t, family="martingale")


def martingale_polys(params: ProcessParams, n: int, t: float) -> list[Poly]:
    """``M_0(.; t), ..., M_n(.; t)`` where ``M_k(y; t) = Q_k(y | 0, 0, t)``."""
    if t < 0:
        raise InvalidTime(f"martingale polynomials need t >= 0, got {t!r}")
    return family_polys(martingale_recurrence(params, t), n)


def martingale_poly(params: ProcessParams, n: int, t: float) -> Poly:
    return martingale_polys(params, n, t)[n]


def martingale_polys_dt(params: ProcessParams, n: int, t: float) -> list[Poly]:
    """Time derivatives ``d/dt M_k(.; t)`` for ``k = 0..n``.

    Differentiating the recurrence gives
    ``D_{k+1} = (y - a_k) D_k - [k]_q M_{k-1} - b_k D_{k-1}`` with
    ``a_k = theta [k]_q``, ``b_k = (t + tau [k-1]_q) [k]_q``.
    """
    M = martingale_polys(params, n, t)
    a, b = martingale_recurrence(params, t).arrays(n + 1)
    br = q_brackets(n + 1, params.q)
    D = [Poly(), Poly()][: n + 1]
    for k in range(1, n):
        D.append(mul_by_linear(D[k], a[k]) - br[k] * M[k - 1] - b[k - 1] * D[k - 1])
    return D


def martingale_poly_dt(params: ProcessParams, n: int, t: float) -> Poly:
    return martingale_polys_dt(params, n, t)[n]


def to_martingale_basis(p: Poly, params: ProcessParams, t: float) -> np.ndarray:
    """Coefficients ``c`` with ``p = sum_k c_k M_k(.; t)``.

    The basis is monic and triangular, so the coefficients come from
    peeling off the leading term one degree at a time.
    """
    n = p.degree
    if n < 0:
        return np.zeros(0)
    M = martingale_polys(params, n, t)
    rem = np.array(p.coeffs, dtype=float)
    c = np.zeros(n + 1)
    for k in range(n, -1, -1):
        c[k] = rem[k]
        mk = M[k].coeffs
        rem[: len(mk)] -= c[k] * mk
    if np.max(np.abs(c)) > BASIS_CONDITION_LIMIT:
        warnings.warn(
            f"martingale-basis coefficients reach {np.max(np.abs(c)):.3g}; "
            "input is badly scaled for this basis",
            RuntimeWarning,
            stacklevel=2,
        )
    return c


def from_martingale_basis(c, params: ProcessParams, t: float) -> Poly:
    c = np.asarray(c, dtype=float)
    if c.size == 0:
        return Poly()
    M = martingale_polys(params, len(c) - 1, t)
    out = Poly()
    for ck, mk in zip(c, M):
        out = out + ck * mk
    return out


def check_qqq_qm(params: ProcessParams, x: float, t: float, n_max: int = 10, n_points: int = 20, seed: int = 0) -> dict:
    """Evaluate the q-binomial expansions of ``Q_n(. | x, t, t)`` numerically.

    Checks, for each n:

    * ``qqq``: ``Q_n(x | x, t, t) = 0`` and
      ``sum_{k=0}^n [n, k]_q Q_{n-k}(0 | x, t, 0) M_k(x; t) = 0`` (n >= 1);
    * ``qm``: ``Q_{n+1}(y | x, t, t)`` equals
      ``sum_{k=1}^{n+1} [n+1, k]_q Q_{n+1-k}(0 | x, t, 0) (M_k(y; t) - M_k(x; t))``;
    * ``factorization``: ``Q_{n+1}(y | x, t, t) = (y - x) W_n(y; x, t)``;
    * ``w_expansion_upper_n``: the same expansion divided by ``y - x`` but
      summed only to ``k = n``. It is reported, not asserted; it differs
      from ``W_n`` by the dropped ``k = n + 1`` term.

    Residuals are absolute differences divided by
    ``max(1, sum of |terms|)``. Returns a dict of per-n residual lists and
    their maxima.
    """
    if not t > 0:
        raise InvalidTime(f"t must be positive, got {t!r}")
    q = params.q
    N = n_max + 1
    rng = np.random.default_rng(seed)
    nu = nu_recurrence(params, x, t)
    half = 2.0 * np.sqrt(np.max(np.abs(nu.arrays(N + 1)[1]))) + 1.0
    y = x + half * rng.uniform(-1.0, 1.0, n_points)
    y = y[np.abs(y - x) > 1e-3 * half]

    q_tt = _q_recurrence(params, x, t, t)
    q_t0 = _q_recurrence(params, x, t, 0.0)
    Q_diag_x = eval_family(q_tt, N, x)
    Q_diag_y = eval_family(q_tt, N, y)
    Q_zero = eval_family(q_t0, N, 0.0)
    M = eval_family(martingale_recurrence(params, t), N, np.concatenate([[x], y]))
    Mx, My = M[:, 0], M[:, 1:]
    W = eval_family(nu, N, y)

    qqq, qm, fact, wdisp = [], [], [], []
    for n in range(1, n_max + 1):
        terms = np.array([q_binomial(n, k, q) * Q_zero[n - k] * Mx[k] for k in range(n + 1)])
        scale = max(1.0, np.abs(terms).sum())
        qqq.append(float(max(abs(Q_diag_x[n]), abs(terms.sum())) / scale))
    for n in range(0, n_max + 1):
        m = n + 1
        terms = np.array([q_binomial(m, k, q) * Q_zero[m - k] * (My[k] - Mx[k]) for k in range(1, m + 1)])
        scale = np.maximum(1.0, np.abs(terms).sum(axis=0))
        qm.append(float(np.max(np.abs(Q_diag_y[m] - terms.sum(axis=0)) / scale)))
        fscale = np.maximum(1.0, np.maximum(np.abs(Q_diag_y[m]), np.abs((y - x) * W[n])))
        fact.append(float(np.max(np.abs(Q_diag_y[m] - (y - x) * W[n]) / fscale)))
        partial = terms[: m - 1].sum(axis=0) / (y - x) if m > 1 else np.zeros_like(y)
        wscale = np.maximum(1.0, np.abs(terms).sum(axis=0) / np.abs(y - x))
        wdisp.append(float(np.max(np.abs(W[n] - partial) / wscale)))

    return {
        "qqq": qqq,
        "qm": qm,
        "factorization": fact,
        "w_expansion_upper_n": wdisp,
        "max_qqq": max(qqq, default=0.0),
        "max_qm": max(qm),
        "max_factorization": max(fact),
        "max_w_expansion_upper_n": max(wdisp),
    }
