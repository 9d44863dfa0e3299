"""Fubini-Study geometry of CP^N at holomorphic sectional curvature 4.

Conventions: the Kähler potential in an affine chart is ``log(1 + |w|^2)``
and the metric is its complex Hessian ``g_{i jbar}``, so that a tangent
vector ``v`` has squared length ``sum g_{i jbar} v_i conj(v_j)``. With this
choice ``Area(CP^1) = pi`` and ``Vol(CP^N) = pi^N / N!``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError

#: Points per RNG block; sample ``i`` lives in block ``i // BLOCK``.
BLOCK = 1024


def canonicalize(z) -> np.ndarray:
    """Unit representative whose first largest-modulus entry is real positive."""
    z = np.asarray(z, dtype=np.complex128)
    norm = np.linalg.norm(z)
    if norm == 0:
        raise InputError("zero vector is not a projective point")
    z = z / norm
    k = int(np.argmax(np.abs(z)))
    return z * (np.conj(z[k]) / abs(z[k]))


def canonicalize_batch(Z) -> np.ndarray:
    Z = np.asarray(Z, dtype=np.complex128)
    Z = Z / np.linalg.norm(Z, axis=-1, keepdims=True)
    k = np.argmax(np.abs(Z), axis=-1)
    lead = np.take_along_axis(Z, k[..., None], axis=-1)
    return Z * (np.conj(lead) / np.abs(lead))


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """Point of CP^N stored as its canonical unit representative."""

    homogeneous: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "homogeneous", canonicalize(self.homogeneous))

    @property
    def N(self) -> int:
        return self.homogeneous.size - 1

    def distance_to(self, other: "ProjectivePoint") -> float:
        """Fubini-Study distance, ``arccos |<z, w>|`` (diameter pi/2)."""
        c = abs(np.vdot(self.homogeneous, other.homogeneous))
        return float(np.arccos(min(1.0, c)))


@dataclass(frozen=True, eq=False)
class SpherePoint:
    """Unit vector of C^{N+1}, i.e. a point of S^{2N+1}."""

    z: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=np.complex128)
        if abs(np.linalg.norm(z) - 1.0) > 1e-12:
            raise InputError("sphere point must have unit norm")
        object.__setattr__(self, "z", z)

    @property
    def real_vector(self) -> np.ndarray:
        return np.concatenate([self.z.real, self.z.imag])

    @classmethod
    def from_real(cls, x) -> "SpherePoint":
        x = np.asarray(x, dtype=float)
        h = x.size // 2
        return cls(x[:h] + 1j * x[h:])


@dataclass(frozen=True, eq=False)
class ChartPoint:
    """Affine coordinates in the chart ``z_{chart_index} = 1``."""

    chart_index: int
    affine: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.affine, dtype=np.complex128))
        if not 0 <= self.chart_index <= a.size:
            raise InputError("chart index out of range")
        object.__setattr__(self, "affine", a)

    @property
    def N(self) -> int:
        return self.affine.size

    def homogeneous(self) -> np.ndarray:
        return np.insert(self.affine, self.chart_index, 1.0)


def hopf_lift(p: ProjectivePoint) -> SpherePoint:
    return SpherePoint(p.homogeneous.copy())


def hopf_project(s: SpherePoint) -> ProjectivePoint:
    return ProjectivePoint(s.z)


def to_chart(p: ProjectivePoint, chart_index: int | None = None) -> ChartPoint:
    z = p.homogeneous
    k = int(np.argmax(np.abs(z))) if chart_index is None else chart_index
    if z[k] == 0:
        raise InputError("point lies outside the requested chart")
    return ChartPoint(k, np.delete(z / z[k], k))


def from_chart(c: ChartPoint) -> ProjectivePoint:
    return ProjectivePoint(c.homogeneous())


def fs_kahler_potential(c: ChartPoint) -> float:
    return float(np.log1p(np.sum(np.abs(c.affine) ** 2)))


def fs_metric(c: ChartPoint) -> np.ndarray:
    """Hermitian matrix ``g_{i jbar} = d_i d_jbar log(1 + |w|^2)``."""
    w = c.affine
    q = 1.0 + np.sum(np.abs(w) ** 2)
    return (np.eye(w.size) * q - np.outer(np.conj(w), w)) / q ** 2


def fs_density(c: ChartPoint) -> float:
    """Volume density ``det g = (1 + |w|^2)^-(N+1)`` against Lebesgue measure."""
    return float((1.0 + np.sum(np.abs(c.affine) ** 2)) ** (-(c.N + 1)))


def fs_volume(N: int) -> float:
    if N < 1:
        raise InputError("N must be at least 1")
    return math.pi ** N / math.factorial(N)


def sphere_volume(dim: int) -> float:
    """Volume of the unit sphere ``S^dim``."""
    return 2.0 * math.pi ** ((dim + 1) / 2) / math.gamma((dim + 1) / 2)


# -- deterministic sampling ---------------------------------------------------

def block_generator(seed: int, stream: int, block: int) -> np.random.Generator:
    """Generator for one block of one named stream; pure function of its key."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream), int(block)))
    return np.random.Generator(np.random.PCG64(ss))


def _blocked(draw, count, seed, stream, start=0):
    # draw(rng, BLOCK) -> array with leading axis BLOCK; sample i lives in block i // BLOCK
    first, last = start // BLOCK, (start + count - 1) // BLOCK
    chunks = [draw(block_generator(seed, stream, b), BLOCK) for b in range(first, last + 1)]
    arr = np.concatenate(chunks, axis=0)
    off = start - first * BLOCK
    return arr[off:off + count]


def uniform_s2(count: int, seed: int, start: int = 0, stream: int = 0) -> np.ndarray:
    """Uniform points on the round unit 2-sphere, shape ``(count, 3)``."""
    def draw(rng, n):
        g = rng.standard_normal((n, 3))
        return g / np.linalg.norm(g, axis=1, keepdims=True)
    return _blocked(draw, count, seed, stream, start)


def s2_to_cp1(X) -> np.ndarray:
    """Unit homogeneous coordinates of the CP^1 point with stereographic image
    ``(x + i y) / (1 + z)``; a curvature-4 CP^1 is the round sphere of radius 1/2."""
    X = np.asarray(X, dtype=float)
    x, y, z = X[:, 0], X[:, 1], X[:, 2]
    out = np.empty((X.shape[0], 2), dtype=np.complex128)
    north = z >= 0
    a = np.sqrt(np.maximum(1.0 + z, 0.0) / 2.0)
    b = np.sqrt(np.maximum(1.0 - z, 0.0) / 2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out[:, 0] = np.where(north, a, (x - 1j * y) / np.sqrt(2.0 * (1.0 - z)))
        out[:, 1] = np.where(north, (x + 1j * y) / np.sqrt(2.0 * (1.0 + z)), b)
    return out


@dataclass(frozen=True)
class FSSamples:
    """Batch of Fubini-Study distributed points of CP^N.

    ``homogeneous`` are canonical unit representatives; ``chart_index`` and
    ``affine`` give the largest-modulus chart, and ``density`` is the chart
    density ``fs_density`` that importance weights divide by. ``mass`` is the
    total FS volume, so ``mass * mean(f)`` estimates the integral of ``f``.
    """

    homogeneous: np.ndarray
    chart_index: np.ndarray
    affine: np.ndarray
    density: np.ndarray
    mass: float

    def __len__(self):
        return self.homogeneous.shape[0]

    def chart_points(self) -> list[ChartPoint]:
        return [ChartPoint(int(k), a) for k, a in zip(self.chart_index, self.affine)]


def _chart_data(Z):
    Z = canonicalize_batch(Z)
    k = np.argmax(np.abs(Z), axis=1)
    lead = np.take_along_axis(Z, k[:, None], axis=1)
    W = Z / lead
    mask = np.ones(Z.shape, dtype=bool)
    mask[np.arange(Z.shape[0]), k] = False
    affine = W[mask].reshape(Z.shape[0], Z.shape[1] - 1)
    N = Z.shape[1] - 1
    density = (1.0 + np.sum(np.abs(affine) ** 2, axis=1)) ** (-(N + 1))
    return Z, k, affine, density


def sample_cp1_fs(count: int, seed: int, start: int = 0) -> FSSamples:
    """FS-uniform points of CP^1 via uniform points of the round 2-sphere."""
    if count < 1:
        raise InputError("count must be positive")
    Z, k, affine, density = _chart_data(s2_to_cp1(uniform_s2(count, seed, start)))
    return FSSamples(Z, k, affine, density, math.pi)


def uniform_sphere_complex(count: int, dim: int, seed: int, start: int = 0,
                           stream: int = 0) -> np.ndarray:
    """Uniform points of ``S^{2 dim - 1}`` as unit vectors of ``C^dim``."""
    def draw(rng, n):
        g = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
        return g / np.linalg.norm(g, axis=1, keepdims=True)
    return _blocked(draw, count, seed, stream, start)


def sample_cpn_fs(N: int, count: int, seed: int, start: int = 0) -> FSSamples:
    """FS-uniform points of CP^N as Hopf images of uniform sphere points."""
    if count < 1:
        raise InputError("count must be positive")
    if N == 1:
        return sample_cp1_fs(count, seed, start)
    Z, k, affine, density = _chart_data(uniform_sphere_complex(count, N + 1, seed, start))
    return FSSamples(Z, k, affine, density, fs_volume(N))


#: Cells per coordinate of the stratified unit cube, indexed by N.
_STRATA = {1: (32, 32), 2: (8, 8, 4, 4)}


def _cube_to_cpn(U: np.ndarray) -> np.ndarray:
    """Moment-map parametrization: ``|w_j|^2`` uniform on the simplex, phases
    uniform. Maps uniform ``[0,1)^{2N}`` to FS-uniform unit vectors of C^{N+1}."""
    P, dim = U.shape
    N = dim // 2
    if N == 1:
        a = np.stack([1.0 - U[:, 0], U[:, 0]], axis=1)
    elif N == 2:
        s = np.sqrt(U[:, 0])
        a = np.stack([1.0 - s, s * (1.0 - U[:, 1]), s * U[:, 1]], axis=1)
    else:
        raise InputError("stratified sampling supports N = 1, 2")
    ph = np.concatenate([np.zeros((P, 1)), 2.0 * math.pi * U[:, N:]], axis=1)
    return np.sqrt(np.maximum(a, 0.0)) * np.exp(1j * ph)


def stratified_cube(count: int, dims: tuple, seed: int, start: int = 0, stream: int = 3) -> np.ndarray:
    """Jittered stratified points of the unit cube, one full stratification
    per RNG block of ``prod(dims)`` samples.

    Each block visits its cells in a seeded random order, so every sample is
    marginally uniform even when a block is cut short.
    """
    cells = int(np.prod(dims))
    if cells != BLOCK:
        raise InputError("strata must fill one RNG block")
    grid = np.stack(np.unravel_index(np.arange(cells), dims), axis=1).astype(float)
    size = np.asarray(dims, dtype=float)

    def draw(rng, n):
        order = rng.permutation(cells)
        return (grid[order] + rng.random((n, len(dims)))) / size
    return _blocked(draw, count, seed, stream, start)


def sample_cpn_stratified(N: int, count: int, seed: int, start: int = 0) -> FSSamples:
    """FS-uniform points of CP^N (N = 1, 2) from a stratified unit cube."""
    if count < 1:
        raise InputError("count must be positive")
    if N not in _STRATA:
        raise InputError("stratified sampling supports N = 1, 2")
    W = _cube_to_cpn(stratified_cube(count, _STRATA[N], seed, start))
    Z, k, affine, density = _chart_data(W)
    return FSSamples(Z, k, affine, density, fs_volume(N))


def uniform_angles(count: int, seed: int, stream: int, start: int = 0) -> np.ndarray:
    """Uniform angles in ``[0, 2 pi)``."""
    return _blocked(lambda rng, n: rng.uniform(0.0, 2.0 * math.pi, n), count, seed, stream, start)
