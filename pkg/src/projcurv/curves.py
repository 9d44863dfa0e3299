"""Intrinsic geometry of plane curves in CP^2.

A curve point is tracked as a root ``y`` of the fiber polynomial over a base
point of CP^1 for the projection that drops one homogeneous coordinate. The
induced metric density is available in closed form; Gaussian curvature comes
from finite differences of ``log lambda`` in a unitary-adapted chart, which
is independent of the extrinsic (shape operator) route.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BranchContinuationError, InputError
from .fubini_study import ChartPoint
from .polynomial import HomogeneousPolynomial, roots_batch
from .radial import curve_pointwise_closed_form
from .spectrum import spectra_batch

#: Relative threshold on ``|f_y|`` below which a fiber root counts as ramified.
EPS_BRANCH = 1e-6
#: Default finite-difference step in the adapted chart (before curvature scaling).
DEFAULT_STEP = 1e-3
#: Newton iteration cap for branch continuation.
NEWTON_MAXITER = 30
#: Allowed overshoot of ``K`` above the ambient bound 4.
K_BOUND_SLACK = 1e-3


def _check_curve(F: HomogeneousPolynomial):
    if F.num_vars != 3:
        raise InputError("expected a plane curve (three homogeneous variables)")


@dataclass(frozen=True, eq=False)
class BranchPoint:
    """Curve point seen as a fiber root of the projection dropping ``projection``.

    ``chart`` is an affine point of the base CP^1 (coordinates with the
    fiber coordinate removed), ``y`` the fiber coordinate in the same chart,
    ``fy`` the fiber derivative and ``yprime = dy/dx = -f_x / f_y``.
    """

    poly: HomogeneousPolynomial
    projection: int
    chart: ChartPoint
    y: complex
    fy: complex
    yprime: complex
    fiber_index: int = 0

    def __post_init__(self):
        if self.chart.N != 1:
            raise InputError("base chart must be a point of CP^1")
        z = self.homogeneous()
        scale = self.poly.coefficient_scale * max(1.0, np.linalg.norm(z)) ** self.poly.degree
        if abs(self.poly(z)) > 1e-9 * scale:
            raise InputError("point is not on the curve")
        if abs(self.fy) < EPS_BRANCH * self.poly.coefficient_scale:
            raise BranchContinuationError("fiber derivative vanishes (ramification)")

    @property
    def x(self) -> complex:
        return complex(self.chart.affine[0])

    def homogeneous(self) -> np.ndarray:
        return np.insert(self.chart.homogeneous(), self.projection, self.y)

    def unit(self) -> np.ndarray:
        z = self.homogeneous()
        return z / np.linalg.norm(z)


@dataclass(frozen=True, eq=False)
class CurvatureSample:
    branch: BranchPoint
    lam: float
    K: float
    kappa: float | None
    profile: float
    weight: float


def branches_over(F: HomogeneousPolynomial, projection: int, chart: ChartPoint) -> list[BranchPoint]:
    """All fiber points over a base chart point, in root order.

    Raises
    ------
    DegenerateFiber
        If the fiber polynomial drops degree in this projection.
    BranchContinuationError
        If the base point is a ramification point.
    """
    _check_curve(F)
    if not 0 <= projection < 3:
        raise InputError("projection index out of range")
    base = chart.homogeneous()
    W = np.insert(base, projection, 0.0)[None, :]
    roots, _ = roots_batch(F.fiber_coeffs(W, projection))
    out = []
    other = [j for j in range(3) if j != projection]
    xi = other[1 - chart.chart_index]
    for idx, y in enumerate(roots[0]):
        z = W[0].copy()
        z[projection] = y
        g = F.grad_batch(z[None, :])[0]
        fy = complex(g[projection])
        fx = complex(g[xi])
        yp = -fx / fy if fy != 0 else complex("nan")
        out.append(BranchPoint(F, projection, chart, complex(y), fy, yp, idx))
    return out


def branch_density(b: BranchPoint) -> float:
    """Induced metric density ``lambda`` with ``ds^2 = lambda |dx|^2``."""
    x, y, yp = b.x, b.y, b.yprime
    q = 1.0 + abs(x) ** 2 + abs(y) ** 2
    return float(((1.0 + abs(yp) ** 2) * q - abs(np.conj(x) + np.conj(y) * yp) ** 2) / q ** 2)


def density_batch(x, y, yp) -> np.ndarray:
    q = 1.0 + np.abs(x) ** 2 + np.abs(y) ** 2
    return ((1.0 + np.abs(yp) ** 2) * q - np.abs(np.conj(x) + np.conj(y) * yp) ** 2) / q ** 2


# -- intrinsic curvature ----------------------------------------------------------

def adapted_frames(F: HomogeneousPolynomial, P):
    """Unitary frames ``(p, t, n)`` at unit curve points ``P`` (shape ``(B, 3)``).

    ``n`` is the unit normal ``conj(grad F)``, ``t`` the unit complex tangent.
    Also returns ``|grad F|`` and ``t^T H t`` (normalized polynomial).
    """
    scale = F.coefficient_scale
    G = F.grad_batch(P) / scale
    gnorm = np.linalg.norm(G, axis=1)
    n = np.conj(G) / np.maximum(gnorm, 1e-300)[:, None]
    t = np.conj(np.cross(P, n))
    t /= np.maximum(np.linalg.norm(t, axis=1), 1e-300)[:, None]
    H = F.hess_batch(P) / scale
    tHt = np.einsum("bi,bij,bj->b", t, H, t)
    return t, n, gnorm, tHt


def project_to_curve(F: HomogeneousPolynomial, P, iters: int = 3) -> np.ndarray:
    """Newton steps along ``conj(grad F)`` that pull near-curve points onto the
    curve (roots near a ramified fiber carry ``O(sqrt(eps))`` error)."""
    P = P / np.linalg.norm(P, axis=1, keepdims=True)
    d = F.degree
    for _ in range(iters):
        G = F.grad_batch(P)
        f = np.einsum("bi,bi->b", P, G) / d
        g2 = np.sum(np.abs(G) ** 2, axis=1)
        P = P - (f / np.maximum(g2, 1e-300))[:, None] * np.conj(G)
        P = P / np.linalg.norm(P, axis=1, keepdims=True)
    return P


def _solve_fiber(F, P, t, n, X, Y0, tol=1e-14):
    """Newton for ``F(p + x t + y n) = 0`` in ``y`` at fixed ``x``, batched.

    Returns ``y``, ``y'``, and a convergence mask.
    """
    scale = F.coefficient_scale
    Y = Y0.copy()
    done = np.zeros(Y.shape, dtype=bool)
    d = F.degree
    for _ in range(NEWTON_MAXITER):
        Z = P + X[:, None] * t + Y[:, None] * n
        G = F.grad_batch(Z) / scale
        f = np.einsum("bi,bi->b", Z, G) / d  # Euler relation
        fy = np.einsum("bi,bi->b", G, n)
        step = f / fy
        Y = np.where(done, Y, Y - step)
        done |= np.abs(step) <= tol * (1.0 + np.abs(Y))
        if done.all():
            break
    Z = P + X[:, None] * t + Y[:, None] * n
    G = F.grad_batch(Z) / scale
    fy = np.einsum("bi,bi->b", G, n)
    fx = np.einsum("bi,bi->b", G, t)
    ok = done & np.isfinite(Y) & (np.abs(fy) > EPS_BRANCH)
    return Y, -fx / fy, ok


_OFFSETS = np.array([1.0, -1.0, 1j, -1j])


def gaussian_curvature_batch(F: HomogeneousPolynomial, P, step: float = DEFAULT_STEP,
                             with_error: bool = False):
    """Gaussian curvature of the induced metric at unit curve points ``P``.

    Five-point Laplacian of ``log lambda`` at steps ``h`` and ``h/2`` with one
    Richardson level, in the chart ``z = p + x t + y n``. The step shrinks with
    the local bending ``|t^T H t| / |grad F|``.

    Returns
    -------
    K : array (B,)
    ok : bool array (B,)
        False where branch continuation failed.
    err : array (B,), only if ``with_error``
        Size of the Richardson correction plus a rounding floor ``8 eps / h^2``;
        a conservative bound on the discretization error of ``K``.
    """
    _check_curve(F)
    P = project_to_curve(F, np.atleast_2d(np.asarray(P, dtype=np.complex128)))
    B = P.shape[0]
    t, n, gnorm, tHt = adapted_frames(F, P)
    bend = np.abs(tHt) / np.maximum(gnorm, 1e-300)
    h = step / np.maximum(1.0, bend)
    hs = np.stack([h, 0.5 * h], axis=1)                        # (B, 2)
    X = (hs[:, :, None] * _OFFSETS[None, None, :]).reshape(B, 8)
    c2 = -0.5 * tHt / np.maximum(gnorm, 1e-300)
    Y0 = c2[:, None] * X ** 2
    rep = np.repeat(np.arange(B), 8)
    Xf, Y0f = X.ravel(), Y0.ravel()
    Y, Yp, conv = _solve_fiber(F, P[rep], t[rep], n[rep], Xf, Y0f)
    lam = density_batch(Xf, Y, Yp)
    L = np.log(np.where(lam > 0, lam, np.nan)).reshape(B, 2, 4)
    D = L.sum(axis=2) / hs ** 2                                  # L(0) = 0 since lambda(0) = 1
    lap = (4.0 * D[:, 1] - D[:, 0]) / 3.0
    K = -0.5 * lap
    ok = conv.reshape(B, 8).all(axis=1) & np.isfinite(K)
    if not with_error:
        return K, ok
    eps = np.finfo(float).eps
    err = 0.5 * (np.abs(D[:, 1] - D[:, 0]) / 3.0 + 8.0 * eps / hs[:, 1] ** 2)
    return K, ok, np.where(ok, err, 0.0)


def gaussian_curvature(b: BranchPoint, step: float = DEFAULT_STEP) -> float:
    """Gaussian curvature at one branch point.

    Raises
    ------
    BranchContinuationError
        If Newton continuation fails on the finite-difference stencil.
    """
    K, ok = gaussian_curvature_batch(b.poly, b.unit()[None, :], step)
    if not ok[0]:
        raise BranchContinuationError("branch continuation failed near this point")
    return float(K[0])


def extrinsic_curvature_batch(F: HomogeneousPolynomial, P):
    """``4 - 2 kappa^2`` from the lifted shape operator, with validity mask."""
    sp = spectra_batch(F, P)
    kappa = sp["kappas"][:, 0]
    return 4.0 - 2.0 * kappa ** 2, kappa, sp["ok"]


def gauss_equation_check(F: HomogeneousPolynomial, b: BranchPoint, step: float = DEFAULT_STEP):
    """``(K_intrinsic, K_extrinsic)`` at one point; the two routes share no code
    beyond polynomial evaluation."""
    if b.poly != F:
        raise InputError("branch point belongs to a different polynomial")
    K_int = gaussian_curvature(b, step)
    K_ext, _, ok = extrinsic_curvature_batch(F, b.unit()[None, :])
    if not ok[0]:
        from .errors import SpectrumStructureError
        raise SpectrumStructureError("lifted spectrum failed validation")
    return K_int, float(K_ext[0])


def curvature_sample(F: HomogeneousPolynomial, b: BranchPoint, weight: float = 1.0,
                     with_kappa: bool = True) -> CurvatureSample:
    lam = branch_density(b)
    K = gaussian_curvature(b)
    kappa = None
    if with_kappa:
        _, kap, _ = extrinsic_curvature_batch(F, b.unit()[None, :])
        kappa = float(kap[0])
    return CurvatureSample(b, lam, K, kappa, curve_pointwise_closed_form(min(K, 4.0)), weight)
