import math

import numpy as np
import pytest

from projcurv import integrator as itg
from projcurv.errors import InputError
from projcurv.polynomial import fermat, parse_text, random_polynomial


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_plane_curve_area_is_degree_pi(d):
    e = itg.area(fermat(d), 8192, seed=1)
    assert abs(e.value - d * math.pi) <= max(4 * e.std_error, 1e-12)
    assert e.n_rejected == 0


def test_surface_area_quadric():
    e = itg.area(fermat(2, 4), 4096, seed=2)
    assert abs(e.value - math.pi ** 2) <= 4 * e.std_error + 1e-12


def test_line_exact():
    line = parse_text("z1", 3)
    e = itg.total_curvature_curve(line, 2048, seed=0)
    assert e.value == pytest.approx(2.0, abs=1e-6)
    assert itg.plan_projections(line, 0).projections == (1,)


def test_threads_do_not_change_result():
    F = random_polynomial(3, 3, 11)
    a, *_ = itg.sample_totals(F, "area_only", 5000, 3, threads=1)
    b, *_ = itg.sample_totals(F, "area_only", 5000, 3, threads=4)
    np.testing.assert_array_equal(a, b)
    e1 = itg.total_curvature_curve(F, 3000, 3, threads=1)
    e2 = itg.total_curvature_curve(F, 3000, 3, threads=3)
    assert e1.value == e2.value and e1.std_error == e2.std_error


def test_seed_changes_result(cubic):
    assert itg.area(cubic, 2048, 1).value != itg.area(cubic, 2048, 2).value


def test_error_ratio_when_doubling_samples():
    # doubling the sample count should shrink the error bar by about 1/sqrt(2)
    F = random_polynomial(3, 3, 11)
    ratios = [itg.total_curvature_curve(F, 16384, s).std_error
              / itg.total_curvature_curve(F, 8192, s).std_error for s in range(8)]
    assert 0.6 <= float(np.mean(ratios)) <= 0.82


def test_degenerate_fiber_triggers_rotation():
    F = parse_text("z0*z2 + z1^2", 3)
    plan = itg.plan_projections(F, 4)
    assert plan.rotation is not None
    U = plan.rotation
    np.testing.assert_allclose(U.conj().T @ U, np.eye(3), atol=1e-12)
    e = itg.area(F, 4096, 4)
    assert e.rotation is not None
    assert abs(e.value - 2 * math.pi) <= 4 * e.std_error


def test_mean_and_error_models(rng):
    x = rng.normal(size=500)
    mu, se, model = itg.mean_and_error(x)
    assert model == "iid"
    assert se == pytest.approx(x.std(ddof=1) / math.sqrt(500))
    heavy = np.zeros(5000)
    heavy[::997] = 1e6
    assert itg.mean_and_error(heavy)[2] == "median_of_means"
    y = rng.normal(size=itg.BLOCK * 10)
    mu, se, model = itg.mean_and_error(y)
    assert model == "stratified_blocks"
    assert se == pytest.approx(1 / math.sqrt(y.size), rel=0.5)
    assert itg.mean_and_error([1.0])[1] == math.inf


def test_deterministic_reduction_exact():
    x = np.array([1e16, 1.0, -1e16] * 50)
    assert itg.mean_and_error(x, deterministic=True)[0] == pytest.approx(1 / 3)


def test_ratio_and_error():
    num = np.array([2.0, 4.0, 6.0, 8.0])
    r, se = itg.ratio_and_error(num, num / 2)
    assert r == 2.0 and se == 0.0


def test_estimate_dispatch_and_errors(conic):
    e = itg.estimate(conic, "area_only", 1024, 0)
    assert e.method == "area_only"
    assert set(e.to_dict()) >= {"value", "std_error", "seed", "method", "error_model"}
    with pytest.raises(InputError):
        itg.estimate(conic, "nonsense", 1024, 0)
    with pytest.raises(InputError):
        itg.total_curvature_curve(fermat(2, 4), 1024, 0)
    with pytest.raises(InputError):
        itg.sample_totals(conic, "area_only", 0, 0)
    assert itg.default_method(conic) == "curve_closed_form"
    assert itg.default_method(fermat(2, 4)) == "hypersurface_radial"


def test_default_threads_env(monkeypatch):
    monkeypatch.setenv("PROJCURV_THREADS", "3")
    assert itg.default_threads() == 3
    monkeypatch.setenv("PROJCURV_THREADS", "many")
    with pytest.raises(InputError):
        itg.default_threads()


def test_jacobian_nonnegative(random_quartic):
    fp = itg.fiber_points(itg.plan_projections(random_quartic, 0), 2048, 0)
    assert np.all(fp.jac >= 0)
    assert np.abs(random_quartic.eval_batch(fp.Z)).max() < 1e-10
