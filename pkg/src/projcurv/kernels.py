"""Backend selection for the polynomial hot kernels.

The compiled Cython module is used when it has been built; otherwise the numpy
fallback is imported. Setting ``PROJCURV_PURE_PYTHON=1`` forces the fallback.
"""
import os

import numpy as np

from . import _pykernels

if os.environ.get("PROJCURV_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND


def available_backends():
    """Mapping of backend name to kernel module for every importable backend."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        return out
    out["cython"] = _ckernels
    return out


def _prep(exps, coeffs):
    return (np.ascontiguousarray(exps, dtype=np.int64),
            np.ascontiguousarray(coeffs, dtype=np.complex128))


def poly_eval(exps, coeffs, Z):
    e, c = _prep(exps, coeffs)
    return _impl.poly_eval(e, c, np.atleast_2d(Z))


def poly_grad(exps, coeffs, Z):
    e, c = _prep(exps, coeffs)
    return _impl.poly_grad(e, c, np.atleast_2d(Z))


def poly_hess(exps, coeffs, Z):
    e, c = _prep(exps, coeffs)
    return _impl.poly_hess(e, c, np.atleast_2d(Z))


def fiber_coeffs(exps, coeffs, W, k, degree):
    e, c = _prep(exps, coeffs)
    return _impl.fiber_coeffs(e, c, np.atleast_2d(W), int(k), int(degree))
