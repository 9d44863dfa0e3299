"""Monte Carlo estimators of area and total absolute curvature.

Sampling scheme
---------------
For each homogeneous coordinate ``k`` the projection dropping ``z_k`` fibers
the hypersurface over CP^{N-1}. A base point ``w`` is drawn Fubini-Study
uniformly (stratified within each RNG block), the fiber polynomial in
``y = z_k`` is solved, and each fiber point ``Z`` is weighted by the smooth
partition of unity ``rho_k = |dF/dz_k|^2 / |grad F|^2``. The weights sum to
one over ``k``, and ``rho_k`` times the area Jacobian stays bounded where the
projection ramifies, so the per-sample totals are bounded and vary smoothly
with the base point.

The area Jacobian is computed without charts: with an orthonormal basis
``dw_a`` of the horizontal space at ``w`` and ``V_a = dw_a + y'_a e_k``, it is
the determinant of the Fubini-Study Gram matrix of the ``V_a`` at ``Z``.

Reduction
---------
Per-base-sample totals are computed in blocks of ``BLOCK`` samples whose RNG
depends only on ``(seed, block)``; the totals are reduced with
``math.fsum``, which is exactly rounded and therefore independent of worker
count and order.
"""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .curves import K_BOUND_SLACK, gaussian_curvature_batch
from .errors import InputError, NumericalError
from .fubini_study import (BLOCK, block_generator, fs_volume, sample_cpn_stratified,
                           sphere_volume)
from .polynomial import HomogeneousPolynomial, compose_linear, roots_batch
from .radial import (curve_pointwise_closed_form, radial_quadrature_batch,
                     sphere_quadrature_batch)
from .spectrum import frames_batch, pair_spectrum, sff_batch, spectra_batch, TOL_SPEC

log = logging.getLogger(__name__)

METHODS = ("curve_closed_form", "hypersurface_radial", "sphere_lift", "area_only",
           "gauss_bonnet", "mean_curvature")
#: Rejected fraction above which an estimate carries a warning.
REJECT_WARN = 0.01
#: Excess kurtosis above which the median-of-means error bar is used.
KURTOSIS_MAX = 50.0
MOM_GROUPS = 10
#: Full blocks needed before block means give the error bar.
MIN_BLOCKS = 8
#: Partition weights below this are dropped (their contribution is negligible).
RHO_MIN = 1e-12
_ROTATION_STREAM = 97
_ANGLE_STREAM = 5


@dataclass
class CurvatureEstimate:
    value: float
    std_error: float
    n_samples: int
    n_rejected: int
    seed: int
    method: str
    n_points: int = 0
    rotation: list | None = None
    warning: str | None = None
    error_model: str = "standard"

    @property
    def rejected_fraction(self) -> float:
        return self.n_rejected / self.n_points if self.n_points else 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def default_threads() -> int:
    env = os.environ.get("PROJCURV_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise InputError(f"PROJCURV_THREADS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


# -- projection setup -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ProjectionPlan:
    """Polynomial in sampling coordinates plus the projections that carry mass."""

    poly: HomogeneousPolynomial
    projections: tuple
    rotation: np.ndarray | None = None


def _random_unitary(n: int, seed: int) -> np.ndarray:
    rng = block_generator(seed, _ROTATION_STREAM, 0)
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(A)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def plan_projections(F: HomogeneousPolynomial, seed: int) -> ProjectionPlan:
    """Pick projections; rotate coordinates (seeded) if a fiber degenerates.

    A projection ``k`` with ``dF/dz_k == 0`` carries no mass and is skipped.
    Otherwise its fiber polynomial has leading coefficient ``F(e_k)``, which
    must be well away from zero.
    """
    from .polynomial import EPS_LEAD

    def usable(P):
        ks, bad = [], False
        for k in range(P.num_vars):
            if not P.depends_on(k):
                continue
            e = np.zeros(P.num_vars, dtype=np.complex128)
            e[k] = 1.0
            if abs(P(e)) <= 1e3 * EPS_LEAD * P.coefficient_scale:
                bad = True
            ks.append(k)
        return tuple(ks), bad

    ks, bad = usable(F)
    if not bad:
        return ProjectionPlan(F, ks)
    for attempt in range(8):
        U = _random_unitary(F.num_vars, seed + attempt)
        G = compose_linear(F, U)
        ks, bad = usable(G)
        if not bad:
            log.info("applied unitary pre-rotation (attempt %d)", attempt)
            return ProjectionPlan(G, ks, U)
    raise NumericalError("could not find a non-degenerate projection")


# -- fiber points -----------------------------------------------------------------

@dataclass
class FiberPoints:
    """Accepted fiber points of one block.

    ``sample`` maps each point to its base sample (block-local index) and
    ``jac`` is the area Jacobian relative to the base FS measure.
    """

    Z: np.ndarray
    sample: np.ndarray
    jac: np.ndarray
    n_base: int


def _horizontal_basis(Wb):
    """Orthonormal basis of the hermitian complement of unit rows ``Wb``."""
    Q, _ = np.linalg.qr(Wb[:, :, None], mode="complete")
    return np.swapaxes(Q[:, :, 1:], 1, 2)                  # (P, n-1, n)


def fiber_points(plan: ProjectionPlan, count: int, seed: int, start: int = 0) -> FiberPoints:
    F = plan.poly
    n = F.num_vars
    base = sample_cpn_stratified(n - 2, count, seed, start)
    Wb = base.homogeneous                                    # (P, n-1)
    Hb = _horizontal_basis(Wb)                               # (P, n-2, n-1)
    Zs, idx, jacs = [], [], []
    for k in plan.projections:
        W = np.insert(Wb, k, 0.0, axis=1)
        roots, _ = roots_batch(F.fiber_coeffs(W, k))
        P, d = roots.shape
        Z = np.repeat(W, d, axis=0)
        Z[:, k] = roots.ravel()
        G = F.grad_batch(Z)
        g2 = np.abs(G) ** 2
        # smooth partition of unity; rho_k * jac stays bounded at ramification
        rho = g2[:, k] / g2.sum(axis=1)
        s = np.repeat(np.arange(P), d)
        keep = rho > RHO_MIN
        Z, G, rho, s = Z[keep], G[keep], rho[keep], s[keep]
        dw = np.insert(Hb[s], k, 0.0, axis=2)               # (Q, n-2, n)
        yp = -np.einsum("qai,qi->qa", dw, G) / G[:, k, None]
        V = dw.copy()
        V[:, :, k] = yp
        z2 = np.sum(np.abs(Z) ** 2, axis=1)
        inner = np.einsum("qai,qbi->qab", V, np.conj(V))
        vz = np.einsum("qai,qi->qa", V, np.conj(Z))
        gram = (inner * z2[:, None, None] - vz[:, :, None] * np.conj(vz)[:, None, :]) / z2[:, None, None] ** 2
        jac = np.linalg.det(gram).real * rho
        Zs.append(Z / np.sqrt(z2)[:, None])
        idx.append(s)
        jacs.append(jac)
    if not Zs:
        return FiberPoints(np.zeros((0, n), np.complex128), np.zeros(0, int), np.zeros(0), count)
    return FiberPoints(np.concatenate(Zs), np.concatenate(idx), np.concatenate(jacs), count)


# -- pointwise integrands ------------------------------------------------------------
# Each returns (values (Q, c), ok (Q,)) for c accumulated channels.

def _f_area(plan, fp, seed, start):
    return fp.jac[:, None], np.ones(fp.jac.shape, bool)


def _f_curve(plan, fp, seed, start):
    # second channel: change of the integrand across the curvature error bound
    K, ok, err = gaussian_curvature_batch(plan.poly, fp.Z, with_error=True)
    ok &= K <= 4.0 + K_BOUND_SLACK
    K = np.where(ok, np.minimum(K, 4.0), 0.0)
    g = curve_pointwise_closed_form(K)
    lo = curve_pointwise_closed_form(K - err)
    hi = curve_pointwise_closed_form(np.minimum(K + err, 4.0))
    dg = np.maximum(np.abs(hi - g), np.abs(lo - g))
    return 8.0 / math.pi * np.stack([g, dg], axis=1) * fp.jac[:, None], ok


def _f_gauss(plan, fp, seed, start):
    K, ok, err = gaussian_curvature_batch(plan.poly, fp.Z, with_error=True)
    return np.stack([K, err], axis=1) * fp.jac[:, None], ok


def _f_mean(plan, fp, seed, start):
    K, ok, err = gaussian_curvature_batch(plan.poly, fp.Z, with_error=True)
    return np.stack([K * fp.jac, fp.jac, err * fp.jac], axis=1), ok


def _f_hyper(plan, fp, seed, start):
    F = plan.poly
    N = F.num_vars - 1
    sp = spectra_batch(F, fp.Z)
    m = N - 1
    rad = radial_quadrature_batch(N, m, sp["kappas"])
    pref = 4.0 * math.pi / fs_volume(N)
    return (pref * rad * fp.jac)[:, None], sp["ok"]


def _f_sphere(plan, fp, seed, start):
    F = plan.poly
    N = F.num_vars - 1
    Q = fp.Z.shape[0]
    rng = block_generator(seed, _ANGLE_STREAM, start // BLOCK)
    phase = rng.uniform(0.0, 2.0 * math.pi, Q)
    theta = rng.uniform(0.0, 2.0 * math.pi, Q)
    Zl = fp.Z * np.exp(1j * phase)[:, None]
    fr = frames_batch(F, Zl)
    U = np.cos(theta)[:, None] * fr["normal"][:, 0] + np.sin(theta)[:, None] * fr["normal"][:, 1]
    B, ok_g = sff_batch(fr, U)
    eigs = np.linalg.eigvalsh(B)
    _, pairing, fiber, scale = pair_spectrum(eigs)
    ok = fr["ok"] & ok_g & (pairing < TOL_SPEC * scale) & (fiber < TOL_SPEC * scale)
    Ns = 2 * N + 1
    I = sphere_quadrature_batch(eigs, Ns)
    # fiber circle 2 pi times normal circle 2 pi over Vol(S^{2N+1})
    pref = 4.0 * math.pi ** 2 / sphere_volume(Ns)
    return (pref * I * fp.jac)[:, None], ok


_INTEGRANDS: dict[str, tuple[Callable, int]] = {
    "area_only": (_f_area, 1),
    "curve_closed_form": (_f_curve, 2),
    "gauss_bonnet": (_f_gauss, 2),
    "mean_curvature": (_f_mean, 3),
    "hypersurface_radial": (_f_hyper, 1),
    "sphere_lift": (_f_sphere, 1),
}


def _block_totals(plan, method, seed, start, count):
    fn, ch = _INTEGRANDS[method]
    fp = fiber_points(plan, count, seed, start)
    tot = np.zeros((count, ch))
    if fp.Z.shape[0] == 0:
        return tot, 0, 0
    vals, ok = fn(plan, fp, seed, start)
    vals = np.where(ok[:, None], vals, 0.0)
    for c in range(ch):
        tot[:, c] = np.bincount(fp.sample, weights=vals[:, c], minlength=count)
    return tot, int((~ok).sum()), int(ok.size)


def sample_totals(F: HomogeneousPolynomial, method: str, count: int, seed: int,
                  threads: int | None = None, plan: ProjectionPlan | None = None):
    """Per-base-sample totals ``(count, channels)`` scaled by the base mass.

    Returns the totals, the rejected point count, the total point count and
    the projection plan.
    """
    if method not in _INTEGRANDS:
        raise InputError(f"unknown method {method!r}")
    if count < 1:
        raise InputError("count must be positive")
    plan = plan_projections(F, seed) if plan is None else plan
    threads = default_threads() if threads is None else max(1, int(threads))
    starts = list(range(0, count, BLOCK))
    job = lambda s: _block_totals(plan, method, seed, s, min(BLOCK, count - s))
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(job, starts))
    else:
        parts = [job(s) for s in starts]
    tot = np.concatenate([p[0] for p in parts], axis=0)
    rej = sum(p[1] for p in parts)
    npts = sum(p[2] for p in parts)
    mass = fs_volume(F.num_vars - 2)
    return tot * mass, rej, npts, plan


# -- reductions -----------------------------------------------------------------------

def _fsum_mean(x, deterministic=True):
    return math.fsum(x) / len(x) if deterministic else float(np.sum(x)) / len(x)


def _iid_error(x, mu):
    n = x.size
    dev = x - mu
    var = math.fsum(dev * dev) / (n - 1)
    se = math.sqrt(var / n)
    if var > 0 and n >= 10 * MOM_GROUPS:
        kurt = (math.fsum(dev ** 4) / n) / (var ** 2) - 3.0
        if kurt > KURTOSIS_MAX:
            g = np.array([math.fsum(c) / c.size for c in np.array_split(x, MOM_GROUPS)])
            gs = math.sqrt(math.fsum((g - g.mean()) ** 2) / (MOM_GROUPS - 1))
            return 1.2533 * gs / math.sqrt(MOM_GROUPS), "median_of_means"
    return se, "iid"


def mean_and_error(x, deterministic: bool = True, block: int = BLOCK):
    """Mean of per-sample totals with a standard error.

    Samples within one RNG block are stratified, so the error bar comes from
    the spread of full-block means (any trailing partial block contributes
    its conservative iid variance). With fewer than ``MIN_BLOCKS`` full
    blocks the iid error is used, switching to median-of-means when the
    excess kurtosis exceeds ``KURTOSIS_MAX``.

    Returns ``(mean, std_error, model)``.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    mu = _fsum_mean(x, deterministic)
    if n < 2:
        return mu, float("inf"), "iid"
    nb = n // block
    if nb < MIN_BLOCKS:
        se, model = _iid_error(x, mu)
        return mu, se, model
    full = x[:nb * block].reshape(nb, block)
    bm = np.array([math.fsum(r) / block for r in full])
    bmu = math.fsum(bm) / nb
    var_b = math.fsum((bm - bmu) ** 2) / (nb - 1)
    tail = x[nb * block:]
    var = var_b * block * block * nb
    if tail.size:
        dev = x - mu
        var += tail.size * math.fsum(dev * dev) / (n - 1)
    return mu, math.sqrt(var) / n, "stratified_blocks"


def ratio_and_error(num, den, deterministic: bool = True):
    """Ratio of sums with a delta-method standard error."""
    num, den = np.asarray(num, float), np.asarray(den, float)
    r = math.fsum(num) / math.fsum(den) if deterministic else float(np.sum(num) / np.sum(den))
    _, se, _ = mean_and_error(num - r * den, deterministic)
    return r, se / abs(_fsum_mean(den, deterministic))


def _finish(method, value, se, model, n, rej, npts, seed, plan):
    warn = None
    if npts and rej / npts > REJECT_WARN:
        warn = f"rejected fraction {rej / npts:.3%} exceeds {REJECT_WARN:.0%}"
        log.warning(warn)
    rot = None if plan.rotation is None else [[[float(c.real), float(c.imag)] for c in row]
                                              for row in plan.rotation]
    return CurvatureEstimate(float(value), float(se), n, rej, seed, method, npts, rot, warn, model)


def _estimate(F, method, count, seed, threads, deterministic, scale=1.0):
    # an optional second channel carries a pointwise discretization bound
    tot, rej, npts, plan = sample_totals(F, method, count, seed, threads)
    v, se, model = mean_and_error(tot[:, 0] * scale, deterministic)
    if tot.shape[1] > 1:
        se = math.hypot(se, abs(scale) * math.fsum(tot[:, 1]) / count)
        model += "+fd_bound"
    return _finish(method, v, se, model, count, rej, npts, seed, plan)


def _require(F: HomogeneousPolynomial, dims: tuple):
    N = F.num_vars - 1
    if N not in dims:
        raise InputError(f"ambient dimension {N} not supported here (need one of {dims})")


# -- public estimators ------------------------------------------------------------------

def area(F: HomogeneousPolynomial, count: int, seed: int, threads: int | None = None,
         deterministic: bool = True) -> CurvatureEstimate:
    """Fubini-Study volume of the hypersurface (curves in CP^2, surfaces in CP^3)."""
    _require(F, (2, 3))
    return _estimate(F, "area_only", count, seed, threads, deterministic)


def total_curvature_curve(F: HomogeneousPolynomial, count: int, seed: int,
                          threads: int | None = None, deterministic: bool = True) -> CurvatureEstimate:
    """``(1/pi) int ((K - 4)^2 + 4) / (6 - K) dA`` with intrinsic ``K``."""
    _require(F, (2,))
    return _estimate(F, "curve_closed_form", count, seed, threads, deterministic)


def total_curvature_hypersurface(F: HomogeneousPolynomial, count: int, seed: int,
                                 threads: int | None = None,
                                 deterministic: bool = True) -> CurvatureEstimate:
    """Radial-profile estimator from the holomorphic principal curvatures."""
    _require(F, (2, 3))
    return _estimate(F, "hypersurface_radial", count, seed, threads, deterministic)


def total_curvature_sphere_lift(F: HomogeneousPolynomial, count: int, seed: int,
                                threads: int | None = None,
                                deterministic: bool = True) -> CurvatureEstimate:
    """Total curvature of the Hopf lift in the round sphere, with random fiber
    phase and random unit normal per point."""
    _require(F, (2, 3))
    return _estimate(F, "sphere_lift", count, seed, threads, deterministic)


def gauss_bonnet(F: HomogeneousPolynomial, count: int, seed: int, threads: int | None = None,
                 deterministic: bool = True) -> CurvatureEstimate:
    """``(1 / 2 pi) int K dA``, the Euler characteristic of a smooth curve."""
    _require(F, (2,))
    return _estimate(F, "gauss_bonnet", count, seed, threads, deterministic, 1.0 / (2.0 * math.pi))


def mean_curvature(F: HomogeneousPolynomial, count: int, seed: int, threads: int | None = None,
                   deterministic: bool = True) -> CurvatureEstimate:
    """Area-weighted mean Gaussian curvature ``int K dA / int dA``.

    The standard error combines the sampling error with the area-weighted
    finite-difference error bound of ``K``, which dominates when ``K`` is
    constant.
    """
    _require(F, (2,))
    tot, rej, npts, plan = sample_totals(F, "mean_curvature", count, seed, threads)
    r, se = ratio_and_error(tot[:, 0], tot[:, 1], deterministic)
    fd = math.fsum(tot[:, 2]) / math.fsum(tot[:, 1])
    return _finish("mean_curvature", r, math.hypot(se, fd), "delta_ratio+fd_bound",
                   count, rej, npts, seed, plan)


ESTIMATORS = {
    "curve_closed_form": total_curvature_curve,
    "hypersurface_radial": total_curvature_hypersurface,
    "sphere_lift": total_curvature_sphere_lift,
    "area_only": area,
    "gauss_bonnet": gauss_bonnet,
    "mean_curvature": mean_curvature,
}


def estimate(F: HomogeneousPolynomial, method: str, count: int, seed: int,
             threads: int | None = None, deterministic: bool = True) -> CurvatureEstimate:
    if method not in ESTIMATORS:
        raise InputError(f"unknown method {method!r}; choose from {sorted(ESTIMATORS)}")
    return ESTIMATORS[method](F, count, seed, threads, deterministic)


def default_method(F: HomogeneousPolynomial) -> str:
    return "curve_closed_form" if F.num_vars == 3 else "hypersurface_radial"
