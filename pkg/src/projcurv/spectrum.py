"""Second fundamental form of the Hopf lift of a projective hypersurface.

The lift ``F^-1(0) ∩ S^{2N+1}`` is cut out in ``R^{2N+2}`` by the three real
constraints ``Re F``, ``Im F`` and ``(|z|^2 - 1)/2``. Its shape operator along
a unit normal ``u`` follows from the level-set formula::

    <II(a, b), u> = -sum_k c_k Hess g_k(a, b),   u = sum_k c_k grad g_k

and has eigenvalues ``0`` (Hopf fiber) and ``±kappa_i`` (holomorphic principal
curvatures of the hypersurface in CP^N).

Complex vectors are identified with real ones as ``(Re z, Im z)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, SingularPointError, SpectrumStructureError
from .polynomial import HomogeneousPolynomial

#: Relative tolerance of the spectrum structure checks.
TOL_SPEC = 1e-7
#: Rank threshold of the constraint-gradient matrix.
SINGULAR_RATIO = 1e-8
#: Condition number limit of the Gram system.
GRAM_COND_MAX = 1e10
#: Allowed ``|F(z)| / scale`` for a point to count as on the variety.
ON_VARIETY_TOL = 1e-9


def realify(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128)
    return np.concatenate([v.real, v.imag], axis=-1)


def complexify(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    h = x.shape[-1] // 2
    return x[..., :h] + 1j * x[..., h:]


def J(x) -> np.ndarray:
    """Complex structure (multiplication by i) on realified vectors."""
    return realify(1j * complexify(x))


@dataclass(frozen=True, eq=False)
class FrameData:
    """Orthonormal frames of the lift at one sphere point (rows are vectors)."""

    z: np.ndarray
    tangent_basis: np.ndarray
    normal_basis: np.ndarray
    fiber_direction: np.ndarray
    constraint_gradients: np.ndarray
    hessian: np.ndarray


@dataclass(frozen=True, eq=False)
class PrincipalSpectrum:
    eigenvalues: np.ndarray
    kappas: np.ndarray
    pairing_residual: float
    fiber_residual: float

    @property
    def spectral_radius(self) -> float:
        return float(np.abs(self.eigenvalues).max()) if self.eigenvalues.size else 0.0


# -- batched core ---------------------------------------------------------------

def frames_batch(F: HomogeneousPolynomial, Z):
    """Frames at many points.

    Returns
    -------
    dict with arrays ``tangent (P, 2m+1, 2n)``, ``normal (P, 2, 2n)``,
    ``C (P, 3, 2n)`` (constraint gradients, rows ``z, grad Re F, grad Im F``),
    ``H (P, n, n)`` (Hessian of the normalized polynomial) and a boolean
    ``ok`` mask that is False at numerically singular points.
    """
    Z = np.atleast_2d(np.asarray(Z, dtype=np.complex128))
    scale = F.coefficient_scale
    G = F.grad_batch(Z) / scale
    H = F.hess_batch(Z) / scale
    C = np.stack([realify(Z), realify(np.conj(G)), realify(1j * np.conj(G))], axis=1)
    _, S, Vt = np.linalg.svd(C, full_matrices=True)
    ok = S[:, -1] >= SINGULAR_RATIO * S[:, 0]
    tangent = Vt[:, C.shape[1]:, :]
    zr = C[:, 0]
    n1 = C[:, 1] - np.sum(C[:, 1] * zr, axis=1, keepdims=True) * zr
    n1 /= np.maximum(np.linalg.norm(n1, axis=1, keepdims=True), 1e-300)
    n2 = C[:, 2] - np.sum(C[:, 2] * zr, axis=1, keepdims=True) * zr
    n2 -= np.sum(n2 * n1, axis=1, keepdims=True) * n1
    n2 /= np.maximum(np.linalg.norm(n2, axis=1, keepdims=True), 1e-300)
    normal = np.stack([n1, n2], axis=1)
    return {"Z": Z, "tangent": tangent, "normal": normal, "C": C, "H": H, "ok": ok}


def sff_batch(frames, U):
    """Second fundamental form matrices ``(P, 2m+1, 2m+1)`` along normals ``U``.

    Also returns a mask that is False where the Gram system is too
    ill-conditioned to trust.
    """
    C, T, H = frames["C"], frames["tangent"], frames["H"]
    U = np.asarray(U, dtype=float)
    gram = np.einsum("pki,pli->pkl", C, C)
    rhs = np.einsum("pki,pi->pk", C, U)
    ev = np.linalg.eigvalsh(gram)
    ok = ev[:, -1] <= GRAM_COND_MAX * np.maximum(ev[:, 0], 1e-300)
    c = np.linalg.solve(np.where(ok[:, None, None], gram, np.eye(3)), rhs[..., None])[..., 0]
    Tc = complexify(T)
    M = np.einsum("pai,pij,pbj->pab", Tc, H, Tc)
    nt = T.shape[1]
    B = -(c[:, 0, None, None] * np.eye(nt) + c[:, 1, None, None] * M.real
          + c[:, 2, None, None] * M.imag)
    return 0.5 * (B + np.swapaxes(B, 1, 2)), ok


def pair_spectrum(eigs):
    """Split sorted spectra ``(P, 2m+1)`` into fiber eigenvalue and ± pairs.

    Returns ``kappas (P, m)`` descending, ``pairing_residual (P,)``,
    ``fiber_residual (P,)`` and the relative ``scale (P,)`` used by the checks.
    """
    eigs = np.sort(np.asarray(eigs, dtype=float), axis=1)
    P, n = eigs.shape
    m = (n - 1) // 2
    fi = np.argmin(np.abs(eigs), axis=1)
    fiber = np.abs(eigs[np.arange(P), fi])
    keep = np.ones_like(eigs, dtype=bool)
    keep[np.arange(P), fi] = False
    rest = eigs[keep].reshape(P, n - 1)
    lo = rest[:, :m]
    hi = rest[:, ::-1][:, :m]
    pairing = np.abs(lo + hi).max(axis=1) if m else np.zeros(P)
    kappas = 0.5 * (hi - lo)
    scale = np.maximum(1.0, np.abs(eigs).max(axis=1))
    return kappas, pairing, fiber, scale


def spectra_batch(F: HomogeneousPolynomial, Z, theta=None):
    """Lifted spectra at many points with normal ``cos t n1 + sin t J n1``.

    Returns a dict with ``eigenvalues``, ``kappas``, ``pairing_residual``,
    ``fiber_residual``, ``trace_ratio`` and a combined validity mask ``ok``.
    """
    fr = frames_batch(F, Z)
    P = fr["Z"].shape[0]
    t = np.zeros(P) if theta is None else np.broadcast_to(np.asarray(theta, float), (P,))
    n1 = fr["normal"][:, 0]
    U = np.cos(t)[:, None] * n1 + np.sin(t)[:, None] * J(n1)
    B, ok_gram = sff_batch(fr, U)
    eigs = np.linalg.eigvalsh(B)
    kappas, pairing, fiber, scale = pair_spectrum(eigs)
    bnorm = np.linalg.norm(B, axis=(1, 2))
    trace_ratio = np.abs(np.trace(B, axis1=1, axis2=2)) / np.maximum(bnorm, 1e-300)
    ok = (fr["ok"] & ok_gram & (pairing < TOL_SPEC * scale) & (fiber < TOL_SPEC * scale))
    return {"eigenvalues": eigs, "kappas": kappas, "pairing_residual": pairing,
            "fiber_residual": fiber, "trace_ratio": trace_ratio, "B": B, "ok": ok}


# -- single-point API -------------------------------------------------------------

def _as_z(z) -> np.ndarray:
    return np.asarray(getattr(z, "z", z), dtype=np.complex128)


def frames_at(F: HomogeneousPolynomial, z) -> FrameData:
    """Tangent and normal frames of the lift at the sphere point ``z``.

    Raises
    ------
    InputError
        If ``z`` is not (numerically) on the lift.
    SingularPointError
        If the constraint gradients are (nearly) dependent.
    """
    z = _as_z(z)
    if abs(np.linalg.norm(z) - 1.0) > 1e-12:
        raise InputError("point must lie on the unit sphere")
    if abs(F(z)) / F.coefficient_scale > ON_VARIETY_TOL:
        raise InputError("point is not on the variety")
    fr = frames_batch(F, z[None, :])
    if not fr["ok"][0]:
        raise SingularPointError("constraint gradients are dependent at this point")
    return FrameData(z=z, tangent_basis=fr["tangent"][0], normal_basis=fr["normal"][0],
                     fiber_direction=realify(1j * z), constraint_gradients=fr["C"][0],
                     hessian=fr["H"][0])


def _frames_dict(frames: FrameData):
    return {"C": frames.constraint_gradients[None], "tangent": frames.tangent_basis[None],
            "H": frames.hessian[None]}


def second_fundamental_form(F: HomogeneousPolynomial, z, u, frames: FrameData | None = None) -> np.ndarray:
    """Matrix of ``<II(t_a, t_b), u>`` in the frame's tangent basis."""
    frames = frames_at(F, z) if frames is None else frames
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1.0) > 1e-10:
        raise InputError("normal must be a unit vector")
    B, ok = sff_batch(_frames_dict(frames), u[None, :])
    if not ok[0]:
        raise SingularPointError("Gram system is ill-conditioned")
    return B[0]


def principal_spectrum(F: HomogeneousPolynomial, z, u, frames: FrameData | None = None) -> PrincipalSpectrum:
    """Eigenvalues of the lifted shape operator and the extracted kappas.

    Raises
    ------
    SpectrumStructureError
        If there is no zero eigenvalue or the rest does not pair as ``±kappa``
        within ``TOL_SPEC`` (relative to ``max(1, spectral radius)``).
    """
    B = second_fundamental_form(F, z, u, frames)
    eigs = np.linalg.eigvalsh(B)
    kappas, pairing, fiber, scale = pair_spectrum(eigs[None, :])
    if fiber[0] >= TOL_SPEC * scale[0]:
        raise SpectrumStructureError(f"no fiber eigenvalue: min |eig| = {fiber[0]:.3e}")
    if pairing[0] >= TOL_SPEC * scale[0]:
        raise SpectrumStructureError(f"eigenvalues do not pair: residual {pairing[0]:.3e}")
    return PrincipalSpectrum(eigenvalues=eigs, kappas=kappas[0], pairing_residual=float(pairing[0]),
                             fiber_residual=float(fiber[0]))


def rotate_normal(u, theta: float, frames: FrameData) -> np.ndarray:
    """``cos(theta) u + sin(theta) J u`` for a normal ``u`` of the lift."""
    u = np.asarray(u, dtype=float)
    Nb = frames.normal_basis
    if np.linalg.norm(u - Nb.T @ (Nb @ u)) > 1e-10:
        raise InputError("u is not in the normal space")
    out = np.cos(theta) * u + np.sin(theta) * J(u)
    return out / np.linalg.norm(out)


def kappas_at(F: HomogeneousPolynomial, z) -> np.ndarray:
    """Holomorphic principal curvatures at ``z`` (first normal of the frame)."""
    fr = frames_at(F, z)
    return principal_spectrum(F, z, fr.normal_basis[0], fr).kappas
