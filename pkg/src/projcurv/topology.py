"""Exact Betti-number bookkeeping and the total-curvature inequalities.

All arithmetic on Betti numbers is integral; checks that involve a measured
total curvature ``T`` take it as a float and report the margin so callers can
apply their own error bars.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, GapError, InputError, InvalidBettiError


@dataclass(frozen=True)
class BettiVector:
    """Real Betti numbers ``dims[0..n]`` of a closed manifold of real dimension ``n``.

    ``complex_dim`` is ``m`` for a complex ``m``-fold (``n = 2m``) and is kept
    for circle-bundle lifts too, whose real dimension is ``2m + 1``.
    """

    dims: tuple
    complex_dim: int
    check_even: bool = True

    def __post_init__(self):
        dims = tuple(int(b) for b in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims or any(b < 0 for b in dims):
            raise InvalidBettiError(f"Betti numbers must be nonnegative: {dims}")
        if dims[0] != 1:
            raise InvalidBettiError("a connected manifold has b_0 = 1")
        if dims != dims[::-1]:
            raise InvalidBettiError(f"Poincare duality fails for {dims}")
        if self.check_even and any(b < 1 for b in dims[::2]):
            raise InvalidBettiError("even Betti numbers of a Kahler manifold are nonzero")

    @property
    def n(self) -> int:
        return len(self.dims) - 1

    @property
    def total(self) -> int:
        return sum(self.dims)

    def __getitem__(self, k: int) -> int:
        return self.dims[k] if 0 <= k <= self.n else 0


def euler_characteristic(d: int, m: int) -> int:
    """Euler characteristic of a smooth degree-``d`` hypersurface of CP^{m+1}."""
    if d < 1 or m < 1:
        raise InputError("need d >= 1 and m >= 1")
    return ((1 - d) ** (m + 2) - 1) // d + m + 2


def hypersurface_betti(d: int, m: int) -> BettiVector:
    """Betti numbers of a smooth degree-``d`` hypersurface of complex dimension ``m``."""
    if d < 1:
        raise InputError("degree must be positive")
    if m == 1:
        g = (d - 1) * (d - 2) // 2
        return BettiVector((1, 2 * g, 1), 1)
    if m == 2:
        chi = d ** 3 - 4 * d ** 2 + 6 * d
        return BettiVector((1, 0, chi - 2, 0, 1), 2)
    raise InputError("only curves (m=1) and surfaces (m=2) are supported")


def gysin_transfer(b: BettiVector) -> BettiVector:
    """Betti numbers of the circle-bundle lift over ``b``.

    ``b~_k = b_k - b_{k-2}`` for ``k <= m`` and ``b~_k = b_{k-1} - b_{k+1}``
    for ``k >= m + 1``.
    """
    if b.n != 2 * b.complex_dim:
        raise InputError("expected the Betti vector of a complex manifold")
    m = b.complex_dim
    out = []
    for k in range(2 * m + 2):
        v = b[k] - b[k - 2] if k <= m else b[k - 1] - b[k + 1]
        if v < 0:
            raise InvalidBettiError(f"negative lifted Betti number at degree {k}")
        out.append(v)
    lifted = BettiVector(tuple(out), m, check_even=False)
    if lifted.total != middle_sum(b):
        raise InvalidBettiError("lifted Betti numbers do not sum to the middle sum")
    return lifted


def middle_sum(b: BettiVector) -> int:
    """``b_{m-1} + 2 b_m + b_{m+1}``."""
    m = b.complex_dim
    return b[m - 1] + 2 * b[m] + b[m + 1]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def _require_T(T: float):
    if not math.isfinite(T) or T < 2:
        raise DomainError(f"total curvature must be at least 2, got {T}")


def check_basicestimate(b: BettiVector, T: float) -> CheckResult:
    """``b_{m-1} + 2 b_m + b_{m+1} <= T``."""
    _require_T(T)
    lhs = middle_sum(b)
    return CheckResult("middle_sum", lhs <= T, lhs, T)


def check_detailedestimate(b: BettiVector, T: float) -> CheckResult:
    """Any even plus any odd Betti number is at most ``T / 2``, and so is
    every even Betti number on its own."""
    _require_T(T)
    evens = [b[k] for k in range(0, b.n + 1, 2)]
    odds = [b[k] for k in range(1, b.n + 1, 2)]
    lhs = max(max(evens) + max(odds), max(evens))
    return CheckResult("even_plus_odd", lhs <= T / 2, lhs, T / 2)


def check_cpcl_a(b: BettiVector, T: float) -> CheckResult:
    """``sum_i b_i <= ((m + 1) / 2) T``."""
    _require_T(T)
    rhs = (b.complex_dim + 1) / 2 * T
    return CheckResult("betti_sum", b.total <= rhs, b.total, rhs)


def all_checks(b: BettiVector, T: float) -> list[CheckResult]:
    return [check_basicestimate(b, T), check_detailedestimate(b, T), check_cpcl_a(b, T)]


# -- plane-curve degree classification -------------------------------------------------

def degree_interval(d: int) -> tuple[int, int]:
    """Range ``[2d^2 - 4d + 4, 2d^2]`` of total curvature of smooth degree-``d`` curves."""
    if d < 1:
        raise InputError("degree must be positive")
    return 2 * d * d - 4 * d + 4, 2 * d * d


def classify_degree(T: float) -> int:
    """The unique degree whose interval contains ``T``.

    Raises
    ------
    DomainError
        If ``T < 2``.
    GapError
        If ``T`` lies strictly between two consecutive intervals.
    """
    _require_T(T)
    d = max(1, math.ceil(math.sqrt(T / 2)))
    lo, hi = degree_interval(d)
    if lo <= T <= hi:
        return d
    raise GapError(f"T = {T} lies in the gap between degrees {d - 1} and {d}")


def average_curvature(d: int) -> Fraction:
    """Mean Gaussian curvature ``2 (3 - d)`` of a smooth degree-``d`` curve."""
    if d < 1:
        raise InputError("degree must be positive")
    return Fraction(2 * (3 - d))


def jensen_value(d: int) -> Fraction:
    """``d ((K_d - 4)^2 + 4) / (6 - K_d)`` in exact arithmetic."""
    K = average_curvature(d)
    return d * ((K - 4) ** 2 + 4) / (6 - K)
