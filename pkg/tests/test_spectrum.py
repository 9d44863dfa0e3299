import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from projcurv.errors import InputError, SingularPointError
from projcurv.polynomial import compose_linear, fermat, parse_text, random_polynomial
from projcurv.spectrum import (J, complexify, frames_at, kappas_at, principal_spectrum, realify,
                               rotate_normal, spectra_batch)
from projcurv.verification import random_points


def _unit(z):
    z = np.asarray(z, dtype=complex)
    return z / np.linalg.norm(z)


def test_realify_round_trip_and_J():
    v = np.array([1 + 2j, -3j])
    np.testing.assert_array_equal(complexify(realify(v)), v)
    x = realify(v)
    np.testing.assert_allclose(J(J(x)), -x)
    assert float(x @ J(x)) == pytest.approx(0.0)


def test_line_is_totally_geodesic(line):
    k = kappas_at(line, _unit([1, 0, 2j]))
    assert k == pytest.approx([0.0], abs=1e-12)


def test_conic_kappa_one(conic):
    k = kappas_at(conic, _unit([1, 1j, 0]))
    assert k == pytest.approx([1.0], abs=1e-10)


def test_quadric_surface_kappas():
    Q = fermat(2, 4)
    k = kappas_at(Q, _unit([1, 1j, 0, 0]))
    assert k == pytest.approx([1.0, 1.0], abs=1e-10)


def test_hyperplane_in_cp3_flat():
    H = parse_text("z0 + z1 + z3", 4)
    k = kappas_at(H, _unit([1, -1, 5, 0]))
    assert k == pytest.approx([0.0, 0.0], abs=1e-12)


def test_spectrum_structure(cubic):
    z = random_points(cubic, 1, 3)[0]
    fr = frames_at(cubic, z)
    sp = principal_spectrum(cubic, z, fr.normal_basis[0], fr)
    assert sp.eigenvalues.size == 3
    assert np.min(np.abs(sp.eigenvalues)) < 1e-8
    assert sp.pairing_residual < 1e-8
    assert sp.spectral_radius == pytest.approx(sp.kappas[0])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.floats(0, 2 * math.pi))
def test_kappas_independent_of_normal_rotation(seed, theta):
    F = random_polynomial(4, 3, 5)
    z = random_points(F, 1, seed)[0]
    fr = frames_at(F, z)
    u = rotate_normal(fr.normal_basis[0], theta, fr)
    a = principal_spectrum(F, z, fr.normal_basis[0], fr).kappas
    b = principal_spectrum(F, z, u, fr).kappas
    np.testing.assert_allclose(a, b, rtol=1e-8, atol=1e-10)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_unitary_invariance(seed):
    F = random_polynomial(3, 3, 2)
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    z = random_points(F, 1, seed)[0]
    G = compose_linear(F, Q)
    w = Q.conj().T @ z
    np.testing.assert_allclose(kappas_at(G, w), kappas_at(F, z), rtol=1e-7, atol=1e-9)


def test_batch_matches_single(cubic):
    Z = random_points(cubic, 8, 4)
    sp = spectra_batch(cubic, Z)
    assert sp["ok"].all()
    for i in range(8):
        np.testing.assert_allclose(sp["kappas"][i], kappas_at(cubic, Z[i]), rtol=1e-9)
    assert np.all(sp["trace_ratio"] < 1e-8)


def test_off_variety_rejected(conic):
    with pytest.raises(InputError):
        frames_at(conic, _unit([1, 0, 0]))
    with pytest.raises(InputError):
        frames_at(conic, np.array([1, 1j, 0]))


def test_singular_point_rejected():
    F = parse_text("z0*z1", 3)
    with pytest.raises(SingularPointError):
        frames_at(F, np.array([0, 0, 1], dtype=complex))


def test_non_normal_rejected(conic):
    z = _unit([1, 1j, 0])
    fr = frames_at(conic, z)
    with pytest.raises(InputError):
        rotate_normal(fr.tangent_basis[0], 0.3, fr)
