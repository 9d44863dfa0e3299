import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from projcurv.errors import InputError
from projcurv.fubini_study import (BLOCK, ChartPoint, ProjectivePoint, SpherePoint, canonicalize,
                                   from_chart, fs_density, fs_metric, fs_volume, hopf_lift,
                                   hopf_project, sample_cp1_fs, sample_cpn_fs,
                                   sample_cpn_stratified, sphere_volume, stratified_cube, to_chart)

from oracles import adaptive_simpson, cp1_area_polar

finite = st.floats(-5, 5, allow_nan=False)


def test_volumes():
    assert fs_volume(1) == pytest.approx(math.pi)
    assert fs_volume(2) == pytest.approx(math.pi ** 2 / 2)
    assert fs_volume(3) == pytest.approx(math.pi ** 3 / 6)
    assert sphere_volume(2) == pytest.approx(4 * math.pi)
    assert sphere_volume(5) == pytest.approx(math.pi ** 3)
    with pytest.raises(InputError):
        fs_volume(0)


def test_cp1_area_from_polar_oracle():
    assert cp1_area_polar() == pytest.approx(fs_volume(1), rel=1e-12)
    # the disc |w| < 1 is a hemisphere
    assert cp1_area_polar(1.0) == pytest.approx(math.pi / 2, rel=1e-12)


def test_cp1_density_matches_metric():
    for w in (0.0, 0.3 + 0.4j, 5.0):
        c = ChartPoint(0, [w])
        assert fs_density(c) == pytest.approx(float(fs_metric(c)[0, 0].real))


def test_cp2_volume_radial_integral():
    # vol = int over C^2 of (1+|w|^2)^-3; in polar form (2 pi)^2 int r1 r2 (1+r1^2+r2^2)^-3
    # = 2 pi^2 int_0^inf rho^3 (1 + rho^2)^-3 d rho with rho = tan t
    f = lambda t: 2 * math.pi ** 2 * math.tan(t) ** 3 * math.cos(t) ** 6 / math.cos(t) ** 2
    assert adaptive_simpson(f, 0.0, math.pi / 2) == pytest.approx(fs_volume(2), rel=1e-10)


def test_metric_hermitian_positive():
    c = ChartPoint(0, [0.3 + 1j, -2.0])
    g = fs_metric(c)
    np.testing.assert_allclose(g, g.conj().T)
    assert np.all(np.linalg.eigvalsh(g) > 0)
    assert np.linalg.det(g).real == pytest.approx(fs_density(c))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=3, max_size=3), finite)
def test_canonicalize_projective_invariance(parts, phase):
    z = np.array([complex(a, b) for a, b in parts])
    if np.linalg.norm(z) < 1e-3:
        return
    w = canonicalize(z)
    np.testing.assert_allclose(canonicalize(2.5 * np.exp(1j * phase) * z), w, atol=1e-12)
    assert np.linalg.norm(w) == pytest.approx(1.0)


def test_chart_round_trip(rng):
    for _ in range(10):
        p = ProjectivePoint(rng.normal(size=3) + 1j * rng.normal(size=3))
        c = to_chart(p)
        assert np.all(np.abs(c.affine) <= 1 + 1e-12)
        assert from_chart(c).distance_to(p) < 1e-7


def test_hopf_round_trip():
    p = ProjectivePoint([1, 1j, 0])
    s = hopf_lift(p)
    assert hopf_project(s).distance_to(p) < 1e-7
    assert SpherePoint.from_real(s.real_vector).z == pytest.approx(s.z)
    with pytest.raises(InputError):
        SpherePoint([1.0, 1.0])


def test_zero_vector_rejected():
    with pytest.raises(InputError):
        ProjectivePoint([0, 0, 0])


def test_sampling_deterministic_and_sliced():
    a = sample_cpn_fs(2, 3000, seed=7)
    b = sample_cpn_fs(2, 1000, seed=7, start=1500)
    np.testing.assert_array_equal(a.homogeneous[1500:2500], b.homogeneous)


def test_fs_uniform_moments():
    # under FS measure on CP^N, E|z_i|^2 = 1/(N+1) and E|z_i|^4 = 2/((N+1)(N+2))
    for sampler, N in ((lambda n: sample_cp1_fs(n, 3), 1), (lambda n: sample_cpn_fs(2, n, 3), 2),
                       (lambda n: sample_cpn_stratified(2, n, 3), 2),
                       (lambda n: sample_cpn_stratified(1, n, 3), 1)):
        Z = sampler(40000).homogeneous
        a2 = np.abs(Z) ** 2
        np.testing.assert_allclose(a2.mean(axis=0), 1 / (N + 1), atol=0.01)
        np.testing.assert_allclose((a2 ** 2).mean(axis=0), 2 / ((N + 1) * (N + 2)), atol=0.01)


def test_stratified_cube_one_point_per_cell():
    U = stratified_cube(BLOCK, (32, 32), seed=1)
    cells = set(map(tuple, np.floor(U * 32).astype(int)))
    assert len(cells) == BLOCK
    with pytest.raises(InputError):
        stratified_cube(10, (4, 4), seed=1)


def test_stratified_rejects_large_N():
    with pytest.raises(InputError):
        sample_cpn_stratified(3, 10, 0)
