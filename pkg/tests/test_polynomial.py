import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from projcurv.errors import DegenerateFiber, InputError
from projcurv.polynomial import (HomogeneousPolynomial, compose_linear, dumps, evaluate, fermat,
                                 from_json_dict, loads, parse_text, partial_derivative,
                                 random_polynomial, roots_batch, to_json_dict, to_text,
                                 univariate_roots)

from oracles import planted_coefficients


def test_evaluate_conic_examples(conic):
    assert evaluate(conic, [1, 1j, 0]) == pytest.approx(0)
    assert evaluate(conic, [1, 0, 0]) == pytest.approx(1)


def test_cubic_homogeneity(cubic, rng):
    assert evaluate(cubic, [2, 0, 0]) == pytest.approx(8)
    for _ in range(20):
        t = complex(*rng.normal(size=2))
        assert evaluate(cubic, [2 * t, 0, 0]) == pytest.approx(8 * t ** 3, rel=1e-12)


def test_dimension_mismatch(conic):
    with pytest.raises(InputError):
        evaluate(conic, [1, 2])


def test_invariants_rejected():
    with pytest.raises(InputError):
        HomogeneousPolynomial(3, 2, {(1, 0, 0): 1.0})
    with pytest.raises(InputError):
        HomogeneousPolynomial(3, 2, {(2, 0): 1.0})
    with pytest.raises(InputError):
        HomogeneousPolynomial(3, 2, {(2, 0, 0): 0.0})


def test_zero_coefficients_dropped():
    F = HomogeneousPolynomial(2, 1, {(1, 0): 1.0, (0, 1): 0.0})
    assert list(F.terms) == [(1, 0)]


def test_partial_derivative_examples(conic):
    d0 = partial_derivative(conic, 0)
    assert d0 == HomogeneousPolynomial(3, 1, {(1, 0, 0): 2.0})
    z0cubed = parse_text("z0^3", 3)
    d1 = partial_derivative(z0cubed, 1)
    assert d1.is_zero and not d1.terms
    assert evaluate(d1, [1, 2, 3]) == 0


def test_partial_derivative_index_bounds(conic):
    with pytest.raises(InputError):
        partial_derivative(conic, 3)


def test_euler_identity_example(cubic):
    z = np.array([1, 2, 3], dtype=complex)
    total = sum(z[i] * evaluate(partial_derivative(cubic, i), z) for i in range(3))
    assert total == pytest.approx(108)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_euler_and_homogeneity_random(seed):
    F = random_polynomial(4, 3, seed)
    rng = np.random.default_rng(seed)
    for _ in range(100):
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        t = complex(*rng.normal(size=2))
        fz = evaluate(F, z)
        assert abs(evaluate(F, t * z) - t ** 4 * fz) <= 1e-12 * abs(t ** 4 * fz)
        euler = sum(z[i] * evaluate(partial_derivative(F, i), z) for i in range(3))
        assert abs(euler - 4 * fz) <= 1e-12 * max(abs(4 * fz), 1.0) * 10


def test_batch_gradient_matches_symbolic(random_quartic, rng):
    Z = rng.normal(size=(10, 3)) + 1j * rng.normal(size=(10, 3))
    G = random_quartic.grad_batch(Z)
    for i in range(3):
        d = partial_derivative(random_quartic, i)
        np.testing.assert_allclose(G[:, i], d.eval_batch(Z), rtol=1e-12)


def test_hessian_symmetric_and_matches(random_quartic, rng):
    Z = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
    H = random_quartic.hess_batch(Z)
    np.testing.assert_allclose(H, np.swapaxes(H, 1, 2), rtol=1e-13)
    d01 = partial_derivative(partial_derivative(random_quartic, 0), 1)
    np.testing.assert_allclose(H[:, 0, 1], d01.eval_batch(Z), rtol=1e-12)


def test_roots_simple():
    r = univariate_roots([1, 0, 1])
    np.testing.assert_allclose(sorted(r, key=lambda z: z.imag), [-1j, 1j], atol=1e-14)


def test_double_root():
    r = univariate_roots([1, -2, 1])
    # a double root is only determined to about sqrt(eps)
    np.testing.assert_allclose(r, [1, 1], atol=1e-7)


def test_planted_roots(rng):
    roots = rng.normal(size=5) + 1j * rng.normal(size=5)
    got = np.array(univariate_roots(planted_coefficients(roots)))
    for r in roots:
        assert np.min(np.abs(got - r)) < 1e-8


def test_roots_sorted_and_deterministic(rng):
    c = rng.normal(size=6) + 1j * rng.normal(size=6)
    a, b = univariate_roots(c), univariate_roots(c)
    assert a == b
    keys = [(z.real, z.imag) for z in a]
    assert keys == sorted(keys)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=6))
def test_root_round_trip(roots):
    coeffs = planted_coefficients(roots)
    got = univariate_roots(coeffs)
    back = planted_coefficients(got)
    np.testing.assert_allclose(back, coeffs, rtol=1e-6, atol=1e-6 * np.abs(coeffs).max())


def test_degenerate_fiber():
    with pytest.raises(DegenerateFiber):
        univariate_roots([1e-14, 1, 1])


def test_batch_residual_small(rng):
    c = rng.normal(size=(50, 5)) + 1j * rng.normal(size=(50, 5))
    _, res = roots_batch(c)
    assert res.max() < 1e-8


def test_json_round_trip(random_quartic):
    text = dumps(random_quartic)
    assert loads(text) == random_quartic
    d = json.loads(text)
    assert set(d) == {"num_vars", "degree", "terms"}
    assert set(d["terms"][0]) == {"exponents", "re", "im"}
    assert from_json_dict(to_json_dict(random_quartic)) == random_quartic


def test_json_errors():
    with pytest.raises(InputError):
        loads("{not json")
    with pytest.raises(InputError):
        loads('{"num_vars": 3}')
    with pytest.raises(InputError):
        loads("[1, 2]")


def test_parse_text_variants():
    F = parse_text("z0^2 + z1^2 + z2^2")
    assert F == fermat(2)
    G = parse_text("(1+2i)*z0^1*z1^2 - 3*z2^3 + i*z0^3")
    assert G.terms[(1, 2, 0)] == 1 + 2j
    assert G.terms[(0, 0, 3)] == -3
    assert G.terms[(3, 0, 0)] == 1j
    assert parse_text(to_text(G)) == G
    assert parse_text("z1", 3).num_vars == 3


@pytest.mark.parametrize("bad", ["", "z0^2 + z1", "z0^2 + + z1^2", "2*x0^2", "z0^-1"])
def test_parse_text_rejects(bad):
    with pytest.raises(InputError):
        parse_text(bad)


def test_compose_linear_matches_substitution(random_quartic, rng):
    Q, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    G = compose_linear(random_quartic, Q)
    w = rng.normal(size=3) + 1j * rng.normal(size=3)
    assert evaluate(G, w) == pytest.approx(evaluate(random_quartic, Q @ w), rel=1e-11)
