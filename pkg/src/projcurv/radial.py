"""Pointwise radial integrands of total absolute curvature and their integrals.

For a point of a complex ``m``-fold in ``CP^N`` with holomorphic principal
curvatures ``kappa_i`` the radial profile is::

    |prod_i (cos^2 r - kappa_i^2 sin^2 r)| cos r sin^(2N-2m-1) r,   0 <= r <= pi/2

The absolute value creates kinks at ``r_i = arctan(1/kappa_i)``; quadrature
splits there and runs fixed-order Gauss-Legendre on each smooth piece.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _dd as dd
from .errors import DomainError, InputError

#: Gauss-Legendre nodes per smooth piece.
GL_ORDER = 40


@dataclass(frozen=True)
class RadialContext:
    N: int
    m: int
    kappas: tuple

    def __post_init__(self):
        k = tuple(float(x) for x in np.atleast_1d(self.kappas))
        if not 1 <= self.m < self.N:
            raise InputError("need 1 <= m < N")
        if len(k) != self.m:
            raise InputError(f"expected {self.m} kappas, got {len(k)}")
        if any(x < 0 for x in k):
            raise InputError("kappas must be nonnegative")
        object.__setattr__(self, "kappas", k)

    @property
    def codim_exponent(self) -> int:
        return 2 * self.N - 2 * self.m - 1


def elementary_symmetric(values: Sequence[float]) -> np.ndarray:
    """``sigma_0 .. sigma_k`` of the given values."""
    sig = np.zeros(len(values) + 1)
    sig[0] = 1.0
    for v in values:
        sig[1:] = sig[1:] + v * sig[:-1]
    return sig


# Pointwise integrands are evaluated in double-double arithmetic on the float
# values of cos r and sin r, so they keep full relative accuracy next to the
# kinks where the factors cancel.

def _cs(r):
    r = np.asarray(r, dtype=float)
    return dd.dd(np.cos(r)), dd.dd(np.sin(r))


def _cp_product(kappas, c, s):
    """Signed ``prod_i (cos^2 r - kappa_i^2 sin^2 r)`` as a double-double."""
    c2, s2 = dd.mul(c, c), dd.mul(s, s)
    prod = dd.dd(np.ones_like(c[0]))
    for k in kappas:
        k2 = dd.two_prod(np.full_like(c[0], k), np.full_like(c[0], k))
        prod = dd.mul(prod, dd.sub(c2, dd.mul(k2, s2)))
    return prod


def cp_integrand(ctx: RadialContext, r):
    c, s = _cs(r)
    val = dd.mul(dd.mul(_cp_product(ctx.kappas, c, s), c), dd.power(s, ctx.codim_exponent))
    return np.abs(dd.value(val))


def cp_integrand_symmetric(ctx: RadialContext, r):
    """Same value as :func:`cp_integrand`, via ``sigma_i(kappa^2)``."""
    c, s = _cs(r)
    shape = c[0].shape
    sig = [dd.dd(np.ones(shape))] + [dd.dd(np.zeros(shape)) for _ in ctx.kappas]
    for k in ctx.kappas:
        k2 = dd.two_prod(np.full(shape, k), np.full(shape, k))
        for i in range(len(sig) - 1, 0, -1):
            sig[i] = dd.add(sig[i], dd.mul(k2, sig[i - 1]))
    m, N = ctx.m, ctx.N
    total = dd.dd(np.zeros(shape))
    for i in range(m + 1):
        term = dd.mul(dd.mul(dd.power(s, 2 * N - 2 * m - 1 + 2 * i), dd.power(c, 2 * m - 2 * i + 1)),
                      sig[i])
        total = dd.add(total, term if i % 2 == 0 else dd.neg(term))
    return np.abs(dd.value(total))


def _sphere_product(eigs, c, s, flip=False):
    prod = dd.dd(np.ones_like(c[0]))
    for k in eigs:
        ks = dd.two_prod(np.full_like(c[0], k), s[0])
        ks = dd.add(ks, dd.two_prod(np.full_like(c[0], k), s[1]))
        f = dd.sub(ks, c) if flip else dd.sub(c, ks)
        prod = dd.mul(prod, f)
    return prod


def sphere_integrand(full_eigs: Sequence[float], N_s: int, r):
    """``|prod_j (cos r - k_j sin r)| sin^(N_s - n - 1) r`` for a submanifold of
    ``S^{N_s}`` with principal curvatures ``full_eigs`` (``n`` of them)."""
    eigs = np.atleast_1d(np.asarray(full_eigs, dtype=float))
    n = eigs.size
    if N_s - n - 1 < 0:
        raise InputError("sphere dimension too small for this submanifold")
    c, s = _cs(r)
    return np.abs(dd.value(dd.mul(_sphere_product(eigs, c, s), dd.power(s, N_s - n - 1))))


def lifted_eigenvalues(kappas: Sequence[float]) -> np.ndarray:
    k = np.asarray(kappas, dtype=float)
    return np.sort(np.concatenate([[0.0], k, -k]))


def lift_identity_check(ctx: RadialContext, r):
    """Sphere integrand of the Hopf lift versus the CP integrand, as ``(lhs, rhs)``."""
    lhs = sphere_integrand(lifted_eigenvalues(ctx.kappas), 2 * ctx.N + 1, r)
    return lhs, cp_integrand(ctx, r)


def dexp_det(ctx: RadialContext, r):
    """Signed Jacobian of the normal exponential map at radius ``r``.

    ``prod_i (cos^2 r - kappa_i^2 sin^2 r) cos r sin^e r / r^e`` with
    ``e = 2N - 2m - 1``.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("radius must be positive")
    c, s = _cs(r)
    prod = dd.value(dd.mul(_cp_product(ctx.kappas, c, s), c))
    return prod * (s[0] / r) ** ctx.codim_exponent


def euclidean_density_check(full_eigs: Sequence[float], N_s: int, theta):
    """Euclidean-cone form of the sphere integrand, as ``(lhs, rhs)``."""
    eigs = np.atleast_1d(np.asarray(full_eigs, dtype=float))
    c, s = _cs(theta)
    lhs = np.abs(dd.value(dd.mul(_sphere_product(eigs, c, s, flip=True),
                                 dd.power(s, N_s - eigs.size - 1))))
    return lhs, sphere_integrand(eigs, N_s, theta)


@lru_cache(maxsize=8)
def _gl(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _split_points(kappas: np.ndarray, upper: float) -> np.ndarray:
    """Sorted breakpoints ``(P, m + 2)`` including the endpoints 0 and ``upper``."""
    k = np.asarray(kappas, dtype=float)
    with np.errstate(divide="ignore"):
        kinks = np.where(k > 0, np.arctan2(1.0, k), upper)
    P = k.shape[0]
    pts = np.concatenate([np.zeros((P, 1)), np.minimum(kinks, upper), np.full((P, 1), upper)], axis=1)
    return np.sort(pts, axis=1)


def radial_quadrature_batch(N: int, m: int, kappas, order: int = GL_ORDER) -> np.ndarray:
    """Integral over ``[0, pi/2]`` of the CP radial profile for each row of
    ``kappas`` (shape ``(P, m)``)."""
    k = np.atleast_2d(np.asarray(kappas, dtype=float))
    if k.shape[1] != m:
        raise InputError("kappa array has the wrong width")
    pts = _split_points(k, math.pi / 2)
    x, w = _gl(order)
    a, b = pts[:, :-1, None], pts[:, 1:, None]
    half = 0.5 * (b - a)
    r = a + half * (x + 1.0)
    c, s = np.cos(r), np.sin(r)
    prod = np.ones_like(r)
    for i in range(m):
        ki = k[:, i, None, None]
        prod = prod * (c * c - ki * ki * s * s)
    vals = np.abs(prod) * c * s ** (2 * N - 2 * m - 1)
    return np.sum(vals * w * half, axis=(1, 2))


def radial_quadrature(ctx: RadialContext, order: int = GL_ORDER) -> float:
    return float(radial_quadrature_batch(ctx.N, ctx.m, [ctx.kappas], order)[0])


def sphere_quadrature_batch(eigs, N_s: int, order: int = GL_ORDER) -> np.ndarray:
    """Integral over ``[0, pi]`` of :func:`sphere_integrand` for each row of
    ``eigs``, split at the roots ``r = arccot(k_j)``."""
    e = np.atleast_2d(np.asarray(eigs, dtype=float))
    P, n = e.shape
    # cos r - k sin r = 0  <=>  r = atan2(1, k) in (0, pi)
    kinks = np.arctan2(1.0, e)
    pts = np.sort(np.concatenate([np.zeros((P, 1)), kinks, np.full((P, 1), math.pi)], axis=1), axis=1)
    x, w = _gl(order)
    a, b = pts[:, :-1, None], pts[:, 1:, None]
    half = 0.5 * (b - a)
    r = a + half * (x + 1.0)
    c, s = np.cos(r), np.sin(r)
    prod = np.ones_like(r)
    for j in range(n):
        prod = prod * (c - e[:, j, None, None] * s)
    vals = np.abs(prod) * s ** (N_s - n - 1)
    return np.sum(vals * w * half, axis=(1, 2))


def alpha_K(K: float) -> float:
    """Sign-change radius ``arcsin sqrt(2 / (6 - K))`` of the curve profile."""
    if K > 4:
        raise DomainError(f"curvature {K} exceeds the ambient bound 4")
    return math.asin(math.sqrt(2.0 / (6.0 - K)))


def curve_pointwise_closed_form(K):
    """Radial integral at a curve point of Gaussian curvature ``K <= 4``:
    ``((K - 4)^2 + 4) / (8 (6 - K))``."""
    K_arr = np.asarray(K, dtype=float)
    if np.any(K_arr > 4):
        raise DomainError("curvature exceeds the ambient bound 4")
    out = ((K_arr - 4.0) ** 2 + 4.0) / (8.0 * (6.0 - K_arr))
    return float(out) if out.ndim == 0 else out


def kappa_from_K(K):
    """Holomorphic principal curvature of a curve point with curvature ``K``."""
    return np.sqrt(np.maximum(4.0 - np.asarray(K, dtype=float), 0.0) / 2.0)
