import numpy as np
import pytest

from projcurv import kernels
from projcurv.polynomial import random_polynomial

BACKENDS = kernels.available_backends()


def test_selected_backend_is_available():
    assert kernels.BACKEND in BACKENDS


def test_compiled_backend_built():
    # the package is expected to ship the compiled core; fallback still works without it
    if "cython" not in BACKENDS:
        pytest.skip("compiled extension not built")
    assert BACKENDS["cython"].BACKEND == "cython"


@pytest.mark.parametrize("degree,nvars", [(1, 3), (3, 3), (4, 3), (2, 4), (3, 4)])
def test_backends_agree(degree, nvars):
    F = random_polynomial(degree, nvars, degree * 10 + nvars)
    e, c = F.exponents, F.coefficients
    rng = np.random.default_rng(degree)
    Z = rng.normal(size=(64, nvars)) + 1j * rng.normal(size=(64, nvars))
    ref = BACKENDS["python"]
    for name, mod in BACKENDS.items():
        np.testing.assert_allclose(mod.poly_eval(e, c, Z), ref.poly_eval(e, c, Z), rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(mod.poly_grad(e, c, Z), ref.poly_grad(e, c, Z), rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(mod.poly_hess(e, c, Z), ref.poly_hess(e, c, Z), rtol=1e-12, atol=1e-12)
        for k in range(nvars):
            np.testing.assert_allclose(mod.fiber_coeffs(e, c, Z, k, degree),
                                       ref.fiber_coeffs(e, c, Z, k, degree), rtol=1e-12, atol=1e-12)


def test_fiber_coeffs_reproduce_polynomial():
    F = random_polynomial(3, 3, 1)
    rng = np.random.default_rng(0)
    W = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
    C = F.fiber_coeffs(W, 1)
    for b in range(5):
        z = W[b].copy()
        z[1] = 0.3 - 0.7j
        assert np.polyval(C[b], z[1]) == pytest.approx(F(z), rel=1e-12)


def test_empty_polynomial_kernels():
    e = np.zeros((0, 3), dtype=np.int64)
    c = np.zeros(0, dtype=np.complex128)
    Z = np.ones((2, 3), dtype=np.complex128)
    for mod in BACKENDS.values():
        assert np.all(mod.poly_eval(e, c, Z) == 0)
        assert np.all(mod.poly_grad(e, c, Z) == 0)


def test_pure_python_fallback_selected_by_env():
    import os
    import subprocess
    import sys
    env = dict(os.environ, PROJCURV_PURE_PYTHON="1")
    code = "import projcurv; print(projcurv.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.strip()
    assert out == "python"
