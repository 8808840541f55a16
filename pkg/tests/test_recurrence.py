import numpy as np
import pytest

from conftest import PARAM_GRID
from qmeixner import (
    InvalidTime,
    InvalidTimeOrder,
    Poly,
    ProcessParams,
    check_qqq_qm,
    eval_family,
    family_poly,
    from_martingale_basis,
    martingale_poly,
    martingale_poly_dt,
    nu_recurrence,
    to_martingale_basis,
    transition_recurrence,
)
from qmeixner.poly import eval_poly
from qmeixner.recurrence import family_polys


def test_transition_coefficients(params):
    x, s, t = 0.7, 0.3, 1.1
    rec = transition_recurrence(params, x, s, t)
    assert rec.a(0) == x
    assert rec.b(1) == pytest.approx(t - s, rel=1e-15)
    q0 = transition_recurrence(ProcessParams(0.0, 0.3, 0.2), x, s, t)
    for n in range(2, 8):
        assert q0.a(n) == pytest.approx(0.3)
        assert q0.b(n) == pytest.approx(t + 0.2)


@pytest.mark.parametrize("s,t", [(0.5, 0.5), (0.7, 0.2), (-0.1, 1.0)])
def test_transition_time_order(params, s, t):
    with pytest.raises(InvalidTimeOrder):
        transition_recurrence(params, 0.0, s, t)


def test_nu_coefficients(params):
    q, theta, tau = params.q, params.theta, params.tau
    x, t = 0.7, 1.1
    rec = nu_recurrence(params, x, t)
    assert rec.a(0) == pytest.approx(theta + q * x)
    assert rec.b(1) == pytest.approx(((1 - q) * t + tau) * (1 + q))
    semi = nu_recurrence(ProcessParams(0.0, 0.3, 0.2), x, t)
    a, b = semi.arrays(10)
    np.testing.assert_allclose(a, 0.3)
    np.testing.assert_allclose(b, t + 0.2)
    with pytest.raises(InvalidTime):
        nu_recurrence(params, x, 0.0)


@pytest.mark.parametrize("p", PARAM_GRID)
def test_positivity_up_to_200(p):
    for x in (-3.0, 0.0, 2.0):
        for s, t in [(0.0, 1e-3), (0.2, 0.7), (5.0, 5.001)]:
            _, b = transition_recurrence(p, x, s, t).arrays(201)
            assert np.all(b > 0)
        _, b = nu_recurrence(p, x, 0.01).arrays(201)
        assert np.all(b > 0)


def test_family_low_degree(params):
    x, s, t = 0.4, 0.2, 1.0
    rec = transition_recurrence(params, x, s, t)
    y = np.linspace(-2, 2, 7)
    vals = eval_family(rec, 2, y)
    np.testing.assert_allclose(vals[0], 1.0)
    np.testing.assert_allclose(vals[1], y - x)
    q, theta = params.q, params.theta
    expected = (y - x) ** 2 - (y - x) * (theta + (q - 1) * x) - (t - s)
    np.testing.assert_allclose(vals[2], expected, rtol=1e-14, atol=1e-14)


def test_family_poly_consistency(params):
    rec = transition_recurrence(params, 0.4, 0.2, 1.0)
    rng = np.random.default_rng(0)
    y = rng.uniform(-2, 2, 10)
    values = eval_family(rec, 15, y)
    for n, p in enumerate(family_polys(rec, 15)):
        assert p.degree == n
        assert p.coeffs[-1] == 1.0
        np.testing.assert_allclose(eval_poly(p, y), values[n], rtol=1e-9, atol=1e-9)
    assert family_poly(rec, 0) == Poly([1.0])


def test_martingale_low_degree(params):
    t = 0.8
    assert martingale_poly(params, 0, t) == Poly([1.0])
    assert martingale_poly(params, 1, t) == Poly([0.0, 1.0])
    np.testing.assert_allclose(martingale_poly(params, 2, t).coeffs, [-t, -params.theta, 1.0])
    # two recurrence steps by hand: M3 = (y - theta(1+q)) M2 - (t + tau)(1+q) M1
    q, theta, tau = params.q, params.theta, params.tau
    M2 = Poly([-t, -theta, 1.0])
    M3 = Poly([-theta * (1 + q), 1.0]) * M2 - (t + tau) * (1 + q) * Poly([0, 1.0])
    np.testing.assert_allclose(martingale_poly(params, 3, t).coeffs, M3.coeffs, rtol=1e-14)
    y = np.random.default_rng(1).uniform(-3, 3, 10)
    np.testing.assert_allclose(eval_poly(martingale_poly(params, 3, t), y), eval_poly(M3, y), rtol=1e-12)


def test_martingale_at_time_zero(params):
    M = martingale_poly(params, 3, 0.0)
    assert M.coeffs[-1] == 1.0


def test_martingale_dt_examples(params):
    assert martingale_poly_dt(params, 0, 1.0).is_zero()
    assert martingale_poly_dt(params, 1, 1.0).is_zero()
    assert martingale_poly_dt(params, 2, 1.0) == Poly([-1.0])


@pytest.mark.parametrize("p", PARAM_GRID[::3])
def test_martingale_dt_finite_difference(p):
    t, h = 0.9, 1e-5
    y = np.linspace(-2, 2, 9)
    for n in range(11):
        fd = (eval_poly(martingale_poly(p, n, t + h), y) - eval_poly(martingale_poly(p, n, t - h), y)) / (2 * h)
        exact = eval_poly(martingale_poly_dt(p, n, t), y)
        np.testing.assert_allclose(exact, fd, atol=1e-6 * max(1.0, np.max(np.abs(exact))))


def test_basis_examples(params):
    t = 0.6
    np.testing.assert_allclose(to_martingale_basis(martingale_poly(params, 3, t), params, t), [0, 0, 0, 1], atol=1e-15)
    np.testing.assert_allclose(to_martingale_basis(Poly([0, 0, 1]), params, t), [t, params.theta, 1.0])
    np.testing.assert_allclose(to_martingale_basis(Poly([1.0]), params, t), [1.0])
    assert from_martingale_basis([0, 1], params, t) == Poly([0, 1])
    np.testing.assert_allclose(from_martingale_basis([t, params.theta, 1], params, t).coeffs, [0, 0, 1], atol=1e-15)


@pytest.mark.parametrize("p", PARAM_GRID[::2])
def test_basis_round_trip(p):
    rng = np.random.default_rng(7)
    for n in range(1, 13):
        c = rng.normal(size=n)
        back = to_martingale_basis(from_martingale_basis(c, p, 0.7), p, 0.7)
        np.testing.assert_allclose(back, c, atol=1e-9)


def test_basis_condition_warning(params):
    with pytest.warns(RuntimeWarning):
        to_martingale_basis(Poly([1e13, 1.0]), params, 1.0)


@pytest.mark.parametrize("p", PARAM_GRID)
def test_factorization_and_q_binomial_identities(p):
    for x, t in [(0.7, 1.0), (-1.0, 0.3), (0.0, 2.0)]:
        r = check_qqq_qm(p, x, t, 12)
        assert r["max_qqq"] < 1e-8
        assert r["max_qm"] < 1e-8
        assert r["max_factorization"] < 1e-8


def test_qqq_reference_point():
    r = check_qqq_qm(ProcessParams(0.5, 0.3, 0.2), 0.7, 1.0, 10)
    assert len(r["qqq"]) == 10 and len(r["qm"]) == 11
    assert r["qm"][0] < 1e-15  # Q_1(y | x, t, t) = y - x
    # the expansion truncated at k = n drops a nonzero term
    assert r["max_w_expansion_upper_n"] > 1e-3
