"""Transition operators and infinitesimal generators of q-Meixner processes.

Two independent routes are available for the generator on polynomials:

* the martingale-basis route: expand ``p`` in ``M_k(.; t)`` and use
  ``A_t M_k(.; t)(x) = -d/dt M_k(x; t)``; no measure is involved;
* the singular-integral route: integrate the x-derivative of the divided
  difference of ``p`` against the Gauss rule of ``nu_{x,t}``.

The auxiliary operators ``H_t`` and ``C_t`` are computed both ways so each
identity can be checked against the other.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidTime, InvalidTimeOrder
from .poly import Poly, divided_difference, eval_poly, generator_integrand
from .qnum import ProcessParams
from .recurrence import (
    martingale_recurrence,
    eval_family,
    martingale_polys_dt,
    nu_recurrence,
    to_martingale_basis,
)
from .spectra import (
    DEFAULT_N,
    DiscreteMeasure,
    jacobi_matrix,
    moments,
    nu_measure,
    transition_measure,
)

Y = Poly([0.0, 1.0])


@dataclass(frozen=True)
class SmoothFn:
    """A function bundled with its first two derivatives."""

    f: Callable
    df: Callable
    d2f: Callable
    name: str = "f"

    def __call__(self, y):
        return self.f(y)


def cauchy() -> SmoothFn:
    """``1 / (1 + y**2)``; its second derivative is bounded by 2."""
    return SmoothFn(
        f=lambda y: 1.0 / (1.0 + np.square(y)),
        df=lambda y: -2.0 * np.asarray(y) / (1.0 + np.square(y)) ** 2,
        d2f=lambda y: (6.0 * np.square(y) - 2.0) / (1.0 + np.square(y)) ** 3,
        name="cauchy",
    )


def gaussian_bump() -> SmoothFn:
    """``exp(-y**2 / 2)``."""
    return SmoothFn(
        f=lambda y: np.exp(-0.5 * np.square(y)),
        df=lambda y: -np.asarray(y) * np.exp(-0.5 * np.square(y)),
        d2f=lambda y: (np.square(y) - 1.0) * np.exp(-0.5 * np.square(y)),
        name="gauss",
    )


BUILTINS = {"cauchy": cauchy, "gauss": gaussian_bump}


def _check_interval(s, t):
    if not (0.0 <= s < t):
        raise InvalidTimeOrder(f"need 0 <= s < t, got s={s!r}, t={t!r}")


def _check_t(t):
    if not t > 0:
        raise InvalidTime(f"t must be positive, got {t!r}")


def _martingale_values(params, n, x, t):
    return eval_family(martingale_recurrence(params, t), n, x)


def apply_transition_poly(p: Poly, params: ProcessParams, x: float, s: float, t: float) -> float:
    """``int p(y) P_{s,t}(x, dy)`` exactly, using ``P_{s,t} M_k(.; t) = M_k(.; s)``."""
    _check_interval(s, t)
    c = to_martingale_basis(p, params, t)
    if c.size == 0:
        return 0.0
    return float(c @ _martingale_values(params, len(c) - 1, x, s))


def apply_transition_quad(f, params: ProcessParams, x: float, s: float, t: float, N: int = DEFAULT_N) -> float:
    """``int f(y) P_{s,t}(x, dy)`` by the N-point Gauss rule."""
    return transition_measure(params, x, s, t, N).integrate(f)


def generator_poly_basis(p: Poly, params: ProcessParams, x: float, t: float) -> float:
    """Generator on a polynomial via the martingale basis: ``-sum_k c_k d/dt M_k(x; t)``."""
    _check_t(t)
    c = to_martingale_basis(p, params, t)
    if c.size == 0:
        return 0.0
    D = martingale_polys_dt(params, len(c) - 1, t)
    return -float(sum(ck * eval_poly(dk, x) for ck, dk in zip(c, D)))


def generator_martingale(params: ProcessParams, n: int, x: float, t: float) -> float:
    """``A_t M_n(.; t)(x) = -d/dt M_n(x; t)``."""
    _check_t(t)
    return -float(eval_poly(martingale_polys_dt(params, n, t)[n], x))


def _nu(params, x, t, N):
    return nu_measure(params, x, t, N)


def _required_n(degree, N):
    if N is None:
        N = max(DEFAULT_N, (degree + 3) // 2)
    if degree + 1 > 2 * N - 1:
        raise ValueError(f"N={N} too small for degree {degree}; need degree + 1 <= 2N - 1")
    return N


def generator_poly(p: Poly, params: ProcessParams, x: float, t: float, N: int | None = None) -> float:
    """Generator on a polynomial as ``int d/dx [(p(y) - p(x)) / (y - x)] nu_{x,t}(dy)``."""
    _check_t(t)
    N = _required_n(p.degree, N)
    r = generator_integrand(p, x)
    if r.is_zero():
        return 0.0
    return _nu(params, x, t, N).integrate(r)


def h_operator_forms(p: Poly, params: ProcessParams, x: float, t: float, N: int | None = None) -> tuple[float, float]:
    """``H_t(p)(x)`` two ways: ``(integral, difference)``.

    ``integral`` is ``int (p(y) - p(x)) / (y - x) nu_{x,t}(dy)``;
    ``difference`` is ``A_t(y p)(x) - x A_t(p)(x)`` with ``A_t`` taken
    through the martingale basis.
    """
    _check_t(t)
    N = _required_n(p.degree + 1, N)
    g = divided_difference(p, x)
    integral = 0.0 if g.is_zero() else _nu(params, x, t, N).integrate(g)
    difference = generator_poly_basis(Y * p, params, x, t) - x * generator_poly_basis(p, params, x, t)
    return integral, difference


def h_operator(p: Poly, params: ProcessParams, x: float, t: float, N: int | None = None) -> float:
    return h_operator_forms(p, params, x, t, N)[0]


def c_operator_forms(p: Poly, params: ProcessParams, x: float, t: float, N: int | None = None) -> tuple[float, float]:
    """``C_t(p)(x) = H_t(y p)(x) - x H_t(p)(x)`` two ways: ``(difference, integral)``.

    ``difference`` expands ``H_t`` through the martingale-basis generator,
    giving ``A(y^2 p) - 2x A(y p) + x^2 A(p)``; ``integral`` is
    ``int p d nu_{x,t}``.
    """
    _check_t(t)
    N = _required_n(p.degree + 2, N)
    A = lambda r: generator_poly_basis(r, params, x, t)  # noqa: E731
    difference = A(Y * Y * p) - 2.0 * x * A(Y * p) + x * x * A(p)
    integral = 0.0 if p.is_zero() else _nu(params, x, t, N).integrate(p)
    return difference, integral


def c_operator(p: Poly, params: ProcessParams, x: float, t: float, N: int | None = None) -> float:
    return c_operator_forms(p, params, x, t, N)[0]


def switch_radius(params: ProcessParams, x: float, t: float, N: int = DEFAULT_N) -> float:
    """Distance from ``x`` below which the generator integrand uses ``f''(x) / 2``."""
    lo, hi = jacobi_matrix(nu_recurrence(params, x, t), N).gershgorin()
    return 1e-6 * (1.0 + abs(x) + 0.5 * (hi - lo))


def smooth_integrand(f: SmoothFn, x: float, delta: float):
    """Bounded continuous integrand ``phi`` of the generator of a smooth ``f``."""
    fx, dfx, half_d2 = float(f.f(x)), float(f.df(x)), 0.5 * float(f.d2f(x))

    def phi(y):
        y = np.asarray(y, dtype=float)
        d = y - x
        far = np.abs(d) > delta
        safe = np.where(far, d, 1.0)
        val = (f.f(y) - fx) / safe**2 - dfx / safe
        return np.where(far, val, half_d2)

    return phi


def generator_smooth(f: SmoothFn, params: ProcessParams, x: float, t: float, N: int = DEFAULT_N) -> float:
    """Weak generator of a smooth bounded ``f`` as ``int phi d nu_{x,t}``.

    A single integral of the continuous extension ``phi`` accounts for both
    a possible atom of ``nu_{x,t}`` at ``x`` and the principal part, which
    Gauss nodes could not separate anyway.
    """
    _check_t(t)
    phi = smooth_integrand(f, x, switch_radius(params, x, t, N))
    return _nu(params, x, t, N).integrate(phi)


def generator_fd(f, params: ProcessParams, x: float, t: float, h: float | None = None, N: int = DEFAULT_N, side: str = "right") -> float:
    """One-sided difference quotient ``(P f - f)(x) / h`` with N-point kernels."""
    if h is None:
        h = 1e-5 * t
    if not h > 0:
        raise ValueError(f"h must be positive, got {h!r}")
    if side == "right":
        s, u = t, t + h
    elif side == "left":
        s, u = t - h, t
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    m = transition_measure(params, x, s, u, N)
    fx = float(np.asarray(f(np.array([x])))[0])
    return float(m.weights @ (np.asarray(f(m.nodes)) - fx)) / h


def rescaled_second_diff_measure(params: ProcessParams, x: float, s: float, t: float, N: int = DEFAULT_N) -> DiscreteMeasure:
    """Reweight the transition rule by ``(y - x)**2 / (t - s)``.

    The raw mass is 1 up to rounding; only that residual is renormalized.
    The result reproduces polynomials of degree up to ``2N - 3``.
    """
    m = transition_measure(params, x, s, t, N)
    w = m.weights * (m.nodes - x) ** 2 / (t - s)
    mass = w.sum()
    if abs(mass - 1.0) > 1e-8:
        raise ArithmeticError(f"rescaled mass {mass!r} deviates from 1")
    return DiscreteMeasure(m.nodes, w / mass, m.exact_degree - 2)


def convergence_study(params: ProcessParams, x: float, t: float, hs, k_max: int = 6, side: str = "left", N: int = 32) -> dict:
    """Moment errors of the rescaled measures against ``nu`` along a step sweep.

    ``side='left'`` uses ``P_{t-h,t}(x, .)`` and compares with ``nu_{x,t}``;
    ``side='right'`` uses ``P_{t,t+h}(x, .)`` and compares with ``nu_{x,t}``
    as well (the base time plays the role of s).

    Returns the error table (rows follow ``hs``, columns are orders
    ``1..k_max``) and least-squares slopes of log error against log h.
    """
    hs = [float(h) for h in hs]
    target = moments(nu_measure(params, x, t, N), k_max)
    table = []
    for h in hs:
        if side == "left":
            m = rescaled_second_diff_measure(params, x, t - h, t, N)
        elif side == "right":
            m = rescaled_second_diff_measure(params, x, t, t + h, N)
        else:
            raise ValueError(f"side must be 'left' or 'right', got {side!r}")
        table.append(moments(m, k_max))
    table = np.array(table)
    err = np.abs(table - target)[:, 1:]
    slopes = []
    for k in range(k_max):
        e = err[:, k]
        if len(hs) < 2 or np.any(e <= 0):
            slopes.append(float("nan"))
        else:
            slopes.append(float(np.polyfit(np.log(hs), np.log(e), 1)[0]))
    return {
        "side": side,
        "h": hs,
        "orders": list(range(1, k_max + 1)),
        "rescaled": table[:, 1:].tolist(),
        "nu": target[1:].tolist(),
        "errors": err.tolist(),
        "slopes": slopes,
    }


def check_chapman_kolmogorov(params: ProcessParams, x: float, s: float, t: float, u: float, k_max: int = 10, N: int = 32) -> dict:
    """Compare moments of ``P_{s,u}(x, .)`` with those of ``P_{s,t} P_{t,u}``.

    The inner expectation is exact (martingale basis); the outer one and
    the left side use Gauss rules. Residuals are relative to
    ``max(1, |moment|)``.
    """
    if not (0.0 <= s < t < u):
        raise InvalidTimeOrder(f"need 0 <= s < t < u, got {(s, t, u)!r}")
    if k_max > 2 * N - 1:
        raise ValueError("k_max exceeds quadrature exactness")
    direct = moments(transition_measure(params, x, s, u, N), k_max)
    mid = transition_measure(params, x, s, t, N)
    Mz = _martingale_values(params, k_max, mid.nodes, t)
    composed = np.empty(k_max + 1)
    for k in range(k_max + 1):
        c = to_martingale_basis(Poly.monomial(k), params, u)
        composed[k] = mid.weights @ (c @ Mz[: k + 1])
    resid = np.abs(direct - composed) / np.maximum(1.0, np.abs(direct))
    return {
        "direct": direct.tolist(),
        "composed": composed.tolist(),
        "residuals": resid.tolist(),
        "max_residual": float(resid.max()),
    }


@dataclass
class ResidualReport:
    check: str
    grid: list = field(default_factory=list)
    max_residual: float | None = 0.0
    tolerance: float = 0.0
    passed: bool = True
    error: str | None = None

    def update(self, point: dict, residual: float):
        self.grid.append(point)
        if residual is None or not math.isfinite(residual):
            self.max_residual = None
            self.passed = False
            return
        if self.max_residual is not None:
            self.max_residual = max(self.max_residual, float(residual))
            self.passed = self.passed and residual < self.tolerance

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return {k: d[k] for k in ("check", "grid", "max_residual", "tolerance", "pass", "error")}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())
