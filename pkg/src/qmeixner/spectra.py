"""Gauss quadrature measures from three-term recurrences.

A monic recurrence with positive ``b_n`` determines a probability measure
(Favard). Its N-point Gauss rule comes from the symmetric Jacobi matrix:
nodes are eigenvalues, weights are squared first components of the
normalized eigenvectors (Golub-Welsch). The eigenproblem is solved here by
an implicit-shift QL iteration that only tracks the first eigenvector row.
"""

from __future__ import annotations

import csv
import io
import json
import math
from functools import lru_cache
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NonPositiveRecurrence
from .qnum import ProcessParams
from .recurrence import RecurrenceCoeffs, nu_recurrence, transition_recurrence

DEFAULT_N = 64
DEFLATION_EPS = 1e-15
MAX_SWEEPS = 50
NEGATIVE_WEIGHT_TOL = 1e-13
MERGE_RTOL = 1e-12


@dataclass(frozen=True)
class JacobiMatrix:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or len(d) < 1 or e.shape != (len(d) - 1,):
            raise ValueError("JacobiMatrix needs N diagonal and N-1 off-diagonal entries")
        if np.any(e <= 0):
            raise ValueError("off-diagonal entries must be strictly positive")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def size(self) -> int:
        return len(self.diag)

    def gershgorin(self) -> tuple[float, float]:
        r = np.zeros(self.size)
        r[:-1] += self.offdiag
        r[1:] += self.offdiag
        return float(np.min(self.diag - r)), float(np.max(self.diag + r))

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite atomic probability measure.

    ``exact_degree`` is the highest polynomial degree the measure reproduces
    exactly when it is a Gauss rule (``2N - 1``), or None for measures that
    are exact as given.
    """

    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int | None = None

    def __post_init__(self):
        x = np.asarray(self.nodes, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if x.ndim != 1 or x.shape != w.shape or len(x) == 0:
            raise ValueError("nodes and weights must be non-empty 1-d arrays of equal length")
        if np.any(np.diff(x) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        x.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "nodes", x)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.nodes)

    def integrate(self, f) -> float:
        return integrate(self, f)

    def moments(self, k_max: int) -> np.ndarray:
        return moments(self, k_max)

    def mean(self) -> float:
        return float(self.weights @ self.nodes)

    def variance(self) -> float:
        m = self.mean()
        return float(self.weights @ (self.nodes - m) ** 2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["node", "weight"])
        for x, w in zip(self.nodes, self.weights):
            writer.writerow([fmt(x), fmt(w)])
        return buf.getvalue()

    def to_json(self) -> str:
        nodes = ", ".join(fmt(x) for x in self.nodes)
        weights = ", ".join(fmt(w) for w in self.weights)
        return f'{{"nodes": [{nodes}], "weights": [{weights}]}}'

    @classmethod
    def from_json(cls, text: str) -> "DiscreteMeasure":
        obj = json.loads(text)
        return cls(np.array(obj["nodes"]), np.array(obj["weights"]))

    @classmethod
    def from_csv(cls, text: str) -> "DiscreteMeasure":
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls(np.array([float(r["node"]) for r in rows]), np.array([float(r["weight"]) for r in rows]))


def fmt(v) -> str:
    """17 significant digits, enough to round-trip a double."""
    return format(float(v), ".17g")


def jacobi_matrix(rec: RecurrenceCoeffs, N: int) -> JacobiMatrix:
    """Symmetric Jacobi matrix with ``diag_i = a_i`` and ``offdiag_i = sqrt(b_{i+1})``."""
    if N < 1:
        raise ValueError(f"N must be at least 1, got {N}")
    a, b = rec.arrays(N)
    bad = np.nonzero(~(b > 0))[0]
    if len(bad):
        raise NonPositiveRecurrence(int(bad[0]) + 1, float(b[bad[0]]))
    return JacobiMatrix(a, np.sqrt(b))


def tridiag_eigen(J: JacobiMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and first eigenvector components of ``J``.

    Implicit QL with Wilkinson-type shifts. The rotations are applied only
    to the first row of the eigenvector matrix, which is all Golub-Welsch
    needs. Signs of the returned components are not normalized.

    Raises
    ------
    NoConvergence
        If some eigenvalue needs more than ``MAX_SWEEPS`` iterations.
    """
    n = J.size
    d = [float(v) for v in J.diag]
    e = [float(v) for v in J.offdiag] + [0.0]
    z = [1.0] + [0.0] * (n - 1)

    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= DEFLATION_EPS * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            if it == MAX_SWEEPS:
                raise NoConvergence(f"eigenvalue {l} not converged after {MAX_SWEEPS} sweeps")
            it += 1

            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # exact underflow: split here and restart
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = z[i + 1]
                z[i + 1] = s * z[i] + c * zi1
                z[i] = c * z[i] - s * zi1
                i -= 1
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0

    order = np.argsort(d, kind="stable")
    return np.asarray(d)[order], np.asarray(z)[order]


def _gauss_from_eigen(nodes, first, exact_degree):
    w = np.asarray(first) ** 2
    w = w / w.sum()
    return _finalize(np.asarray(nodes, dtype=float), w, exact_degree)


def _finalize(nodes, w, exact_degree):
    if np.any(w < -NEGATIVE_WEIGHT_TOL):
        raise ValueError(f"quadrature weight {w.min()!r} is negative beyond rounding")
    w = np.clip(w, 0.0, None)
    w = w / w.sum()
    width = nodes[-1] - nodes[0]
    if len(nodes) > 1:
        tol = MERGE_RTOL * max(width, np.finfo(float).tiny)
        keep = np.concatenate([[True], np.diff(nodes) > tol])
        if not keep.all():
            groups = np.cumsum(keep) - 1
            merged_w = np.bincount(groups, weights=w)
            merged_x = np.bincount(groups, weights=w * nodes) / np.where(merged_w > 0, merged_w, 1.0)
            first = nodes[keep]
            nodes = np.where(merged_w > 0, merged_x, first)
            w = merged_w
    return DiscreteMeasure(nodes, w, exact_degree)


def quadrature(rec: RecurrenceCoeffs, N: int = DEFAULT_N) -> DiscreteMeasure:
    """N-point Gauss rule of the orthogonality measure of ``rec``."""
    J = jacobi_matrix(rec, N)
    nodes, first = tridiag_eigen(J)
    return _gauss_from_eigen(nodes, first, 2 * N - 1)


def quadrature_batch(diag: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rules for a stack of recurrences, via LAPACK on dense matrices.

    ``diag`` has shape (K, N) and ``b`` shape (K, N-1). Returns nodes and
    clamped, renormalized weights of shape (K, N). Intended for the many
    small kernels of path simulation; no node merging is done.
    """
    diag = np.asarray(diag, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(b <= 0):
        k, n = np.argwhere(b <= 0)[0]
        raise NonPositiveRecurrence(int(n) + 1, float(b[k, n]))
    K, N = diag.shape
    A = np.zeros((K, N, N))
    idx = np.arange(N)
    A[:, idx, idx] = diag
    off = np.sqrt(b)
    A[:, idx[:-1], idx[1:]] = off
    A[:, idx[1:], idx[:-1]] = off
    nodes, vecs = np.linalg.eigh(A)
    w = vecs[:, 0, :] ** 2
    w = np.clip(w, 0.0, None)
    w /= w.sum(axis=1, keepdims=True)
    return nodes, w


@lru_cache(maxsize=4096)
def transition_measure(params: ProcessParams, x: float, s: float, t: float, N: int = DEFAULT_N) -> DiscreteMeasure:
    """N-point approximation of ``P_{s,t}(x, dy)``, exact up to degree 2N-1."""
    return quadrature(transition_recurrence(params, x, s, t), N)


@lru_cache(maxsize=4096)
def nu_measure(params: ProcessParams, x: float, t: float, N: int = DEFAULT_N) -> DiscreteMeasure:
    """N-point approximation of ``nu_{x,t}(dy)``."""
    return quadrature(nu_recurrence(params, x, t), N)


def integrate(m: DiscreteMeasure, f) -> float:
    vals = np.asarray(f(m.nodes), dtype=float)
    if vals.ndim == 0:
        vals = np.array([float(f(x)) for x in m.nodes])
    return float(m.weights @ vals)


def moments(m: DiscreteMeasure, k_max: int) -> np.ndarray:
    """Raw moments ``m_0..m_{k_max}``.

    Raises ValueError when ``k_max`` exceeds the exactness degree of a
    Gauss rule.
    """
    if m.exact_degree is not None and k_max > m.exact_degree:
        raise ValueError(f"moment order {k_max} exceeds exactness degree {m.exact_degree}")
    powers = m.nodes[None, :] ** np.arange(k_max + 1)[:, None]
    return powers @ m.weights


def semicircle_measure(mean: float, variance: float, N: int = DEFAULT_N) -> DiscreteMeasure:
    """Gauss rule of the semicircle law, whose recurrence is a_n = mean, b_n = variance."""
    if not variance > 0:
        raise ValueError(f"variance must be positive, got {variance!r}")
    return quadrature(RecurrenceCoeffs.constant(mean, variance, family="semicircle"), N)


def semicircle_moments(mean: float, variance: float, k_max: int) -> np.ndarray:
    """Closed-form raw moments of the semicircle law via Catalan numbers."""
    central = np.zeros(k_max + 1)
    for k in range(0, k_max + 1, 2):
        j = k // 2
        central[k] = math.comb(2 * j, j) / (j + 1) * variance**j
    raw = np.zeros(k_max + 1)
    for n in range(k_max + 1):
        raw[n] = sum(math.comb(n, k) * central[k] * mean ** (n - k) for k in range(n + 1))
    return raw


def two_point_transition(theta: float, x: float, s: float, t: float) -> DiscreteMeasure:
    """Exact two-atom transition law of the q = -1 case."""
    if not s < t:
        raise ValueError("two_point_transition requires s < t")
    root = math.sqrt((theta - 2 * x) ** 2 + 4 * (t - s))
    lo, hi = 0.5 * (theta - root), 0.5 * (theta + root)
    w_lo = 0.5 + (theta - 2 * x) / (2 * root)
    return DiscreteMeasure(np.array([lo, hi]), np.array([w_lo, 1.0 - w_lo]))
