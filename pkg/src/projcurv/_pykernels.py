"""Pure numpy implementations of the polynomial hot kernels.

Every function here has a drop-in twin in the compiled ``_ckernels`` module;
:mod:`projcurv.kernels` picks one at import time. Shapes: ``exps`` is
``(T, n)`` int64, ``coeffs`` is ``(T,)`` complex128, point batches are
``(P, n)`` complex128.
"""
import numpy as np

BACKEND = "python"


def _power_table(Z, dmax):
    P, n = Z.shape
    tab = np.empty((P, n, dmax + 1), dtype=np.complex128)
    tab[..., 0] = 1.0
    for e in range(1, dmax + 1):
        tab[..., e] = tab[..., e - 1] * Z
    return tab


def _term_values(tab, exps, orders):
    # prod_i falling(e_i, o_i) * z_i**(e_i - o_i), as a (P, T) array
    n = exps.shape[1]
    lowered = exps - np.asarray(orders)[None, :]
    alive = np.all(lowered >= 0, axis=1)
    scale = np.ones(exps.shape[0])
    for i, o in enumerate(orders):
        for s in range(o):
            scale = scale * (exps[:, i] - s)
    scale = np.where(alive, scale, 0.0)
    idx = np.clip(lowered, 0, None)
    fac = tab[:, np.arange(n)[None, :], idx]
    return fac.prod(axis=-1) * scale[None, :]


def poly_eval(exps, coeffs, Z):
    Z = np.ascontiguousarray(Z, dtype=np.complex128)
    if exps.shape[0] == 0:
        return np.zeros(Z.shape[0], dtype=np.complex128)
    tab = _power_table(Z, int(exps.max()))
    return _term_values(tab, exps, (0,) * exps.shape[1]) @ coeffs


def poly_grad(exps, coeffs, Z):
    Z = np.ascontiguousarray(Z, dtype=np.complex128)
    P, n = Z.shape
    out = np.zeros((P, n), dtype=np.complex128)
    if exps.shape[0] == 0:
        return out
    tab = _power_table(Z, int(exps.max()))
    for i in range(n):
        orders = [0] * n
        orders[i] = 1
        out[:, i] = _term_values(tab, exps, orders) @ coeffs
    return out


def poly_hess(exps, coeffs, Z):
    Z = np.ascontiguousarray(Z, dtype=np.complex128)
    P, n = Z.shape
    out = np.zeros((P, n, n), dtype=np.complex128)
    if exps.shape[0] == 0:
        return out
    tab = _power_table(Z, int(exps.max()))
    for i in range(n):
        for j in range(i, n):
            orders = [0] * n
            orders[i] += 1
            orders[j] += 1
            col = _term_values(tab, exps, orders) @ coeffs
            out[:, i, j] = col
            out[:, j, i] = col
    return out


def fiber_coeffs(exps, coeffs, W, k, degree):
    """Coefficients in y of F(W with W[:, k] replaced by y), highest power first."""
    W = np.ascontiguousarray(W, dtype=np.complex128)
    P, n = W.shape
    out = np.zeros((P, degree + 1), dtype=np.complex128)
    if exps.shape[0] == 0:
        return out
    tab = _power_table(W, int(exps.max()))
    base_exps = exps.copy()
    base_exps[:, k] = 0
    vals = _term_values(tab, base_exps, (0,) * n) * coeffs[None, :]
    for t in range(exps.shape[0]):
        out[:, degree - exps[t, k]] += vals[:, t]
    return out
