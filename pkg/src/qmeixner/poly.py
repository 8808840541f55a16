"""Dense univariate polynomials in the monomial basis.

Only the handful of operations the generator formulas need are provided:
evaluation, ring operations, differentiation, and the divided-difference
constructions ``(p(y) - p(x0)) / (y - x0)`` and its x-derivative.
"""

from __future__ import annotations

import numpy as np


def _trim(coeffs):
    coeffs = np.asarray(coeffs, dtype=float).ravel()
    nz = np.nonzero(coeffs)[0]
    if len(nz) == 0:
        return np.zeros(0)
    return coeffs[: nz[-1] + 1].copy()


class Poly:
    """Immutable real polynomial; ``coeffs[i]`` multiplies ``y**i``.

    Trailing coefficients that are exactly zero are dropped, so the zero
    polynomial has an empty coefficient vector and degree -1. Tiny but
    nonzero leading coefficients are kept.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs=()):
        c = _trim(coeffs)
        c.setflags(write=False)
        self._c = c

    @classmethod
    def monomial(cls, n, c=1.0):
        coeffs = np.zeros(n + 1)
        coeffs[n] = c
        return cls(coeffs)

    @classmethod
    def constant(cls, c):
        return cls([c])

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return len(self._c) == 0

    def __call__(self, y):
        return eval_poly(self, y)

    def __add__(self, other):
        return add(self, _as_poly(other))

    __radd__ = __add__

    def __neg__(self):
        return scale(self, -1.0)

    def __sub__(self, other):
        return add(self, scale(_as_poly(other), -1.0))

    def __rsub__(self, other):
        return add(_as_poly(other), scale(self, -1.0))

    def __mul__(self, other):
        if isinstance(other, Poly):
            if self.is_zero() or other.is_zero():
                return Poly()
            return Poly(np.convolve(self._c, other._c))
        return scale(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash(self._c.tobytes())

    def __repr__(self):
        return f"Poly({self._c.tolist()!r})"


def _as_poly(p):
    return p if isinstance(p, Poly) else Poly.constant(p)


def eval_poly(p: Poly, y):
    """Horner evaluation; ``y`` may be a scalar or an array."""
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    for c in p.coeffs[::-1]:
        out = out * y + c
    return out if out.ndim else float(out)


def add(p: Poly, r: Poly) -> Poly:
    n = max(len(p.coeffs), len(r.coeffs))
    out = np.zeros(n)
    out[: len(p.coeffs)] += p.coeffs
    out[: len(r.coeffs)] += r.coeffs
    return Poly(out)


def scale(p: Poly, c: float) -> Poly:
    return Poly(p.coeffs * c)


def mul_by_linear(p: Poly, c: float) -> Poly:
    """Return ``(y - c) * p``."""
    if p.is_zero():
        return Poly()
    out = np.zeros(len(p.coeffs) + 1)
    out[1:] += p.coeffs
    out[:-1] -= c * p.coeffs
    return Poly(out)


def derivative(p: Poly) -> Poly:
    if p.degree < 1:
        return Poly()
    return Poly(p.coeffs[1:] * np.arange(1, len(p.coeffs)))


def divided_difference(p: Poly, x0: float) -> Poly:
    """Quotient ``g`` with ``g(y) * (y - x0) = p(y) - p(x0)``, by synthetic division."""
    c = p.coeffs
    n = len(c) - 1
    if n < 1:
        return Poly()
    out = np.empty(n)
    acc = c[n]
    out[n - 1] = acc
    for k in range(n - 1, 0, -1):
        acc = c[k] + x0 * acc
        out[k - 1] = acc
    return Poly(out)


def generator_integrand(p: Poly, x0: float) -> Poly:
    """Polynomial ``r`` with ``r(y) (y - x0)**2 = p(y) - p(x0) - p'(x0) (y - x0)``.

    This is the x-derivative of ``(p(y) - p(x)) / (y - x)`` at ``x = x0``,
    and ``r(x0) = p''(x0) / 2``.
    """
    return divided_difference(divided_difference(p, x0), x0)
