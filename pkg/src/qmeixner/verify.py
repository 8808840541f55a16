"""Identity suites over a parameter grid, producing JSON-ready residual reports."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .markov import (
    ResidualReport,
    apply_transition_quad,
    c_operator_forms,
    cauchy,
    check_chapman_kolmogorov,
    convergence_study,
    generator_fd,
    generator_martingale,
    generator_poly,
    generator_smooth,
    h_operator_forms,
)
from .poly import Poly, eval_poly
from .qnum import ProcessParams, q_bracket
from .recurrence import (
    check_qqq_qm,
    eval_family,
    martingale_polys,
    martingale_recurrence,
    nu_recurrence,
    transition_recurrence,
)
from .spectra import jacobi_matrix, moments, nu_measure, quadrature, semicircle_moments, transition_measure

TIMES = (0.2, 0.7, 1.3)


def default_grid() -> dict:
    return {
        "q": [-0.5, 0.0, 0.3, 0.7],
        "theta": [0.0, 0.3],
        "tau": [0.0, 0.2],
        "x": [-1.0, 0.0, 0.4],
        "times": list(TIMES),
    }


def grid_points(grid):
    for q, theta, tau, x in itertools.product(grid["q"], grid["theta"], grid["tau"], grid["x"]):
        yield ProcessParams(q, theta, tau), x


def _point(params, x):
    return {"q": params.q, "theta": params.theta, "tau": params.tau, "x": x}


def _rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


def suite_martingale(params, x, N, s, t, u):
    m = transition_measure(params, x, s, t, N)
    return abs(m.mean() - x)


def suite_variance(params, x, N, s, t, u):
    m = transition_measure(params, x, s, t, N)
    return abs(m.integrate(lambda y: (y - x) ** 2) - (t - s))


def suite_mp(params, x, N, s, t, u):
    Mt = martingale_polys(params, 10, t)
    Ms = eval_family(martingale_recurrence(params, s), 10, x)
    worst = 0.0
    for n in range(11):
        val = apply_transition_quad(Mt[n], params, x, s, t, N)
        worst = max(worst, abs(val - Ms[n]) / (1.0 + abs(Ms[n])))
    return worst


def suite_ck(params, x, N, s, t, u):
    return check_chapman_kolmogorov(params, x, s, t, u, 10, N)["max_residual"]


def suite_hm(params, x, N, s, t, u):
    M = martingale_polys(params, 10, t)
    worst = 0.0
    for k in range(11):
        integral, difference = h_operator_forms(M[k], params, x, t, N)
        ref = q_bracket(k, params.q) * eval_poly(M[k - 1], x) if k else 0.0
        worst = max(worst, _rel(integral, ref), _rel(difference, ref))
    return worst


def suite_c(params, x, N, s, t, u, trials=20):
    rng = np.random.default_rng(12345)
    worst = 0.0
    for _ in range(trials):
        p = Poly(rng.normal(size=7))
        difference, integral = c_operator_forms(p, params, x, t, N)
        worst = max(worst, _rel(difference, integral))
    return worst


def suite_generator(params, x, N, s, t, u):
    M = martingale_polys(params, 10, t)
    worst = 0.0
    for n in range(11):
        worst = max(worst, _rel(generator_poly(M[n], params, x, t, N), generator_martingale(params, n, x, t)))
    return worst


def suite_generator_y2(params, x, N, s, t, u):
    return abs(generator_poly(Poly([0.0, 0.0, 1.0]), params, x, t, N) - 1.0)


def suite_smooth(params, x, N, s, t, u):
    """Relative gap between the difference quotient and the singular integral.

    Returns ``inf`` if the generator exceeds ``sup|f''| / 2 = 1``.
    """
    f = cauchy()
    n_big = max(N, 64)
    smooth = generator_smooth(f, params, x, t, n_big)
    fd = generator_fd(f.f, params, x, t, 1e-5 * t, n_big, "right")
    if abs(smooth) > 1.0 + 1e-12:
        return math.inf
    return abs(fd - smooth) / (1.0 + abs(smooth))


def suite_semicircle(params, x, N, s, t, u):
    """q = 0 moments against Catalan moments; q-Brownian node identity when theta = tau = 0."""
    worst = 0.0
    if params.q == 0.0:
        got = moments(nu_measure(params, x, t, N), 8)
        ref = semicircle_moments(params.theta, t + params.tau, 8)
        worst = max(worst, float(np.max(np.abs(got - ref) / np.maximum(1.0, np.abs(ref)))))
    if params.theta == 0.0 and params.tau == 0.0:
        a = nu_measure(params, x, t, N)
        b = transition_measure(params, params.q * x, params.q**2 * t, t, N)
        if len(a) != len(b):
            return math.inf
        worst = max(worst, float(np.max(np.abs(a.nodes - b.nodes))), float(np.max(np.abs(a.weights - b.weights))))
    return worst


def suite_qqq(params, x, N, s, t, u):
    r = check_qqq_qm(params, x, t, 10)
    return max(r["max_qqq"], r["max_qm"], r["max_factorization"])


def gauss_exactness(rec, N):
    """Worst deviation of the normalized Gram matrix of p_0..p_N from the identity.

    The ``(N, N)`` entry is skipped: degree 2N is beyond exactness.
    Also returns whether all nodes lie in the Gershgorin interval and the
    minimum weight.
    """
    m = quadrature(rec, N)
    _, b = rec.arrays(N + 1)
    norms = np.sqrt(np.concatenate([[1.0], np.cumprod(b)]))
    P = eval_family(rec, N, m.nodes) / norms[:, None]
    G = (P * m.weights) @ P.T
    dev = np.abs(G - np.eye(N + 1))
    dev[N, N] = 0.0
    lo, hi = jacobi_matrix(rec, N).gershgorin()
    inside = bool(np.all((m.nodes >= lo) & (m.nodes <= hi)))
    return float(dev.max()), inside, float(m.weights.min())


def suite_quadrature(params, x, N, s, t, u):
    worst = 0.0
    for rec in (transition_recurrence(params, x, s, t), nu_recurrence(params, x, t)):
        dev, inside, wmin = gauss_exactness(rec, N)
        if not inside or wmin < 0:
            return math.inf
        worst = max(worst, dev)
    return worst


EXACT_FLOOR = 1e-12


def convergence_slope_residual(params, x, t, N=32, hs=(1e-1, 1e-2, 1e-3), k_max=6):
    """Largest ``|slope - 1|`` over orders and both sides.

    Orders whose error stays at rounding level for every h converge
    exactly and are skipped.
    """
    worst = 0.0
    for side in ("left", "right"):
        res = convergence_study(params, x, t, hs, k_max, side, N)
        scale = np.maximum(1.0, np.abs(res["nu"]))
        err = np.array(res["errors"]) / scale
        for j, slope in enumerate(res["slopes"]):
            if np.all(err[:, j] < EXACT_FLOOR):
                continue
            if not np.isfinite(slope):
                return math.inf
            worst = max(worst, abs(slope - 1.0))
    return worst


def suite_converge(params, x, N, s, t, u):
    return convergence_slope_residual(params, x, t, N)


SUITES = {
    "martingale": (suite_martingale, 1e-10),
    "variance": (suite_variance, 1e-10),
    "mp": (suite_mp, 1e-8),
    "ck": (suite_ck, 1e-8),
    "hm": (suite_hm, 1e-8),
    "c": (suite_c, 1e-8),
    "generator": (suite_generator, 1e-8),
    "generator_y2": (suite_generator_y2, 1e-10),
    "smooth": (suite_smooth, 1e-3),
    "semicircle": (suite_semicircle, 1e-9),
    "qqq": (suite_qqq, 1e-8),
    "quadrature": (suite_quadrature, 1e-8),
    "converge": (suite_converge, 0.2),
}


def run_suite(name, grid, N=32) -> ResidualReport:
    fn, tol = SUITES[name]
    s, t, u = grid.get("times", TIMES)
    report = ResidualReport(check=name, tolerance=tol)
    for params, x in grid_points(grid):
        try:
            residual = float(fn(params, x, N, s, t, u))
        except (ArithmeticError, ValueError) as exc:
            report.error = f"{type(exc).__name__}: {exc}"
            residual = math.nan
        report.update(_point(params, x), residual)
    return report


def run_suites(grid=None, only=None, N=32) -> dict:
    grid = grid or default_grid()
    names = only or list(SUITES)
    checks = [run_suite(name, grid, N).to_dict() for name in names]
    return {"checks": checks, "pass": all(c["pass"] for c in checks)}
