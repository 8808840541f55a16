import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmeixner.poly import (
    Poly,
    add,
    derivative,
    divided_difference,
    eval_poly,
    generator_integrand,
    mul_by_linear,
    scale,
)


def test_eval():
    assert eval_poly(Poly(), 3.0) == 0
    assert eval_poly(Poly([1, 2, 1]), 2.0) == 9.0
    assert eval_poly(Poly.monomial(3), -1.5) == -3.375
    np.testing.assert_array_equal(eval_poly(Poly([1, 1]), np.array([0.0, 1.0])), [1.0, 2.0])


def test_ring_ops():
    assert derivative(Poly([0, 0, 1])) == Poly([0, 2])
    assert mul_by_linear(Poly([1]), 2.0) == Poly([-2, 1])
    z = add(Poly([0, 1]), Poly([0, -1]))
    assert z.is_zero() and len(z.coeffs) == 0 and z.degree == -1
    assert scale(Poly([1, 2]), 0.0).is_zero()
    assert (Poly([1, 1]) * Poly([-1, 1])) == Poly([-1, 0, 1])


def test_near_zero_leading_kept():
    assert Poly([1.0, 1e-300]).degree == 1


def test_divided_difference_examples():
    assert divided_difference(Poly([0, 0, 1]), 1.0) == Poly([1, 1])
    assert divided_difference(Poly([5.0]), 2.0).is_zero()
    g = divided_difference(Poly.monomial(3), 2.0)
    assert g == Poly([4, 2, 1])
    # g(y)(y - 2) + 8 = y^3
    assert mul_by_linear(g, 2.0) + 8.0 == Poly.monomial(3)


@pytest.mark.parametrize("x0", [-1.3, 0.0, 0.7])
def test_generator_integrand_examples(x0):
    assert generator_integrand(Poly([0, 0, 1]), x0) == Poly([1.0])
    r = generator_integrand(Poly.monomial(3), x0)
    np.testing.assert_allclose(r.coeffs, [2 * x0, 1.0], atol=1e-15)
    assert generator_integrand(Poly([3.0]), x0).is_zero()


coeff_lists = st.lists(st.floats(-5, 5), min_size=1, max_size=11)


@settings(max_examples=50)
@given(coeff_lists, st.floats(-3, 3), st.integers(0, 2**32 - 1))
def test_divided_difference_identity(coeffs, x0, seed):
    p = Poly(coeffs)
    g = divided_difference(p, x0)
    y = np.random.default_rng(seed).uniform(-4, 4, 20)
    lhs = eval_poly(g, y) * (y - x0) + eval_poly(p, x0)
    rhs = eval_poly(p, y)
    scale_ = np.maximum(1.0, np.abs(np.abs(p.coeffs)).sum() * np.maximum(1, np.abs(y)) ** max(p.degree, 0))
    assert np.all(np.abs(lhs - rhs) <= 1e-10 * scale_)
    if p.degree >= 1:
        assert g.degree == p.degree - 1


@settings(max_examples=50)
@given(coeff_lists, st.floats(-3, 3))
def test_generator_integrand_at_x0_is_half_second_derivative(coeffs, x0):
    p = Poly(coeffs)
    r = generator_integrand(p, x0)
    expected = 0.5 * eval_poly(derivative(derivative(p)), x0)
    scale_ = max(1.0, np.abs(p.coeffs).sum() * max(1.0, abs(x0)) ** max(p.degree, 0))
    assert abs(eval_poly(r, x0) - expected) <= 1e-9 * scale_


def test_generator_integrand_matches_closed_form():
    rng = np.random.default_rng(3)
    p = Poly(rng.normal(size=8))
    x0 = 0.4
    r = generator_integrand(p, x0)
    y = rng.uniform(-2, 2, 15)
    dp = eval_poly(derivative(p), x0)
    expected = (eval_poly(p, y) - eval_poly(p, x0)) / (y - x0) ** 2 - dp / (y - x0)
    np.testing.assert_allclose(eval_poly(r, y), expected, rtol=1e-7, atol=1e-7)
