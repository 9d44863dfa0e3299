"""Sparse homogeneous polynomials over C and univariate root solving.

A :class:`HomogeneousPolynomial` stores its terms as an exponent matrix plus a
coefficient vector. Evaluation and derivatives run through
:mod:`projcurv.kernels`, so batches of points are cheap.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .errors import DegenerateFiber, InputError

#: Relative threshold on the leading coefficient of a fiber polynomial.
EPS_LEAD = 1e-10


@dataclass(frozen=True, eq=False)
class HomogeneousPolynomial:
    """Homogeneous polynomial in ``num_vars`` complex variables.

    Parameters
    ----------
    num_vars : int
        Number of homogeneous coordinates (``N + 1`` for a hypersurface of
        ``CP^N``).
    degree : int
        Total degree ``d``. A zero polynomial keeps the degree it was derived
        with but has ``is_zero`` set and no terms.
    terms : mapping
        Exponent tuple to complex coefficient. Zero coefficients are dropped.
    """

    num_vars: int
    degree: int
    terms: Mapping[tuple, complex] = field(default_factory=dict)
    is_zero: bool = False

    def __post_init__(self):
        if self.num_vars < 1:
            raise InputError("num_vars must be positive")
        clean = {}
        for exps, c in dict(self.terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.num_vars:
                raise InputError(f"exponent vector {exps} has wrong length")
            if any(e < 0 for e in exps):
                raise InputError(f"negative exponent in {exps}")
            if sum(exps) != self.degree:
                raise InputError(
                    f"term {exps} has degree {sum(exps)}, expected {self.degree}")
            c = complex(c)
            if c != 0:
                clean[exps] = clean.get(exps, 0) + c
        clean = {k: v for k, v in sorted(clean.items(), reverse=True) if v != 0}
        if not clean and not self.is_zero:
            raise InputError("polynomial has no nonzero terms")
        if clean and self.is_zero:
            raise InputError("zero polynomial cannot carry terms")
        object.__setattr__(self, "terms", clean)
        exps = np.array(list(clean), dtype=np.int64).reshape(len(clean), self.num_vars)
        coeffs = np.array(list(clean.values()), dtype=np.complex128)
        object.__setattr__(self, "_exps", exps)
        object.__setattr__(self, "_coeffs", coeffs)

    @classmethod
    def zero(cls, num_vars: int, degree: int) -> "HomogeneousPolynomial":
        return cls(num_vars, degree, {}, is_zero=True)

    @property
    def exponents(self) -> np.ndarray:
        return self._exps

    @property
    def coefficients(self) -> np.ndarray:
        return self._coeffs

    @property
    def coefficient_scale(self) -> float:
        """Largest coefficient modulus (1.0 for the zero polynomial)."""
        return float(np.abs(self._coeffs).max()) if self._coeffs.size else 1.0

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        return (self.num_vars == other.num_vars and self.degree == other.degree
                and self.is_zero == other.is_zero and self.terms == other.terms)

    def __hash__(self):
        return hash((self.num_vars, self.degree, tuple(self.terms.items())))

    def __repr__(self):
        return f"HomogeneousPolynomial({to_text(self)!r}, num_vars={self.num_vars})"

    def _check_points(self, Z):
        Z = np.asarray(Z, dtype=np.complex128)
        if Z.shape[-1] != self.num_vars:
            raise InputError(
                f"point has {Z.shape[-1]} coordinates, polynomial has {self.num_vars} variables")
        return Z

    def __call__(self, z):
        return evaluate(self, z)

    def eval_batch(self, Z) -> np.ndarray:
        """Values at the rows of ``Z`` (shape ``(P, num_vars)``)."""
        Z = self._check_points(Z)
        return kernels.poly_eval(self._exps, self._coeffs, Z)

    def grad_batch(self, Z) -> np.ndarray:
        """Holomorphic gradients ``dF/dz_i`` at the rows of ``Z``."""
        Z = self._check_points(Z)
        return kernels.poly_grad(self._exps, self._coeffs, Z)

    def hess_batch(self, Z) -> np.ndarray:
        """Complex Hessians ``d2F/dz_i dz_j`` at the rows of ``Z``."""
        Z = self._check_points(Z)
        return kernels.poly_hess(self._exps, self._coeffs, Z)

    def fiber_coeffs(self, W, k: int) -> np.ndarray:
        """Coefficients in ``y`` (highest first) of ``F`` with column ``k`` of
        ``W`` replaced by ``y``; shape ``(P, degree + 1)``."""
        W = self._check_points(np.atleast_2d(W))
        return kernels.fiber_coeffs(self._exps, self._coeffs, W, k, self.degree)

    def scaled(self, factor: complex) -> "HomogeneousPolynomial":
        return HomogeneousPolynomial(
            self.num_vars, self.degree, {k: v * factor for k, v in self.terms.items()})

    def depends_on(self, var_index: int) -> bool:
        return bool(np.any(self._exps[:, var_index] > 0))


def evaluate(poly: HomogeneousPolynomial, z) -> complex:
    """Value of ``poly`` at a single point ``z``."""
    z = np.asarray(z, dtype=np.complex128)
    if z.ndim != 1:
        raise InputError("evaluate expects a single point; use eval_batch")
    return complex(poly.eval_batch(z[None, :])[0])


def partial_derivative(poly: HomogeneousPolynomial, var_index: int) -> HomogeneousPolynomial:
    """Exact derivative with respect to ``z_{var_index}``."""
    if not 0 <= var_index < poly.num_vars:
        raise InputError(f"variable index {var_index} out of range")
    new_degree = max(poly.degree - 1, 0)
    terms = {}
    for exps, c in poly.terms.items():
        e = exps[var_index]
        if e == 0:
            continue
        lowered = list(exps)
        lowered[var_index] -= 1
        terms[tuple(lowered)] = c * e
    if not terms:
        return HomogeneousPolynomial.zero(poly.num_vars, new_degree)
    return HomogeneousPolynomial(poly.num_vars, new_degree, terms)


def compose_linear(poly: HomogeneousPolynomial, U) -> HomogeneousPolynomial:
    """The polynomial ``w -> poly(U @ w)`` expanded into monomials."""
    U = np.asarray(U, dtype=np.complex128)
    n = poly.num_vars
    if U.shape != (n, n):
        raise InputError("substitution matrix has the wrong shape")
    # each z_i = sum_j U[i, j] w_j; expand products term by term
    result: dict = {}
    for exps, c in poly.terms.items():
        partial = {(0,) * n: c}
        for i, e in enumerate(exps):
            for _ in range(e):
                nxt: dict = {}
                for mono, val in partial.items():
                    for j in range(n):
                        if U[i, j] == 0:
                            continue
                        m = list(mono)
                        m[j] += 1
                        key = tuple(m)
                        nxt[key] = nxt.get(key, 0) + val * U[i, j]
                partial = nxt
        for mono, val in partial.items():
            result[mono] = result.get(mono, 0) + val
    tol = 1e-14 * max(abs(v) for v in result.values())
    result = {k: v for k, v in result.items() if abs(v) > tol}
    return HomogeneousPolynomial(n, poly.degree, result)


# -- root solving -----------------------------------------------------------

def _companion_roots(coeffs: np.ndarray) -> np.ndarray:
    """Batched companion-matrix roots; ``coeffs`` is ``(P, d+1)`` highest first."""
    P, d1 = coeffs.shape
    d = d1 - 1
    monic = coeffs[:, 1:] / coeffs[:, :1]
    comp = np.zeros((P, d, d), dtype=np.complex128)
    comp[:, 0, :] = -monic
    if d > 1:
        idx = np.arange(d - 1)
        comp[:, idx + 1, idx] = 1.0
    return np.linalg.eigvals(comp)


def _horner(coeffs, y):
    val = np.zeros_like(y)
    der = np.zeros_like(y)
    for j in range(coeffs.shape[-1]):
        der = der * y + val
        val = val * y + coeffs[..., j:j + 1]
    return val, der


def roots_batch(coeffs, polish: bool = True):
    """Roots of many univariate polynomials at once.

    Parameters
    ----------
    coeffs : array, shape (P, d+1)
        Coefficients, highest power first.

    Returns
    -------
    roots : array, shape (P, d)
        Sorted by real part, then imaginary part.
    residual : array, shape (P,)
        Largest scaled residual ``|p(r)| / sum_j |c_j| |r|^j`` per row.

    Raises
    ------
    DegenerateFiber
        If any leading coefficient is below ``EPS_LEAD`` times that row's
        largest coefficient modulus.
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=np.complex128))
    scale = np.abs(coeffs).max(axis=1)
    if np.any(np.abs(coeffs[:, 0]) <= EPS_LEAD * scale):
        raise DegenerateFiber("leading coefficient below threshold")
    d = coeffs.shape[1] - 1
    if d == 0:
        return np.zeros((coeffs.shape[0], 0), np.complex128), np.zeros(coeffs.shape[0])
    roots = _companion_roots(coeffs)
    if polish and d > 1:
        # one Newton step, skipped inside clusters of near-multiple roots where
        # it would pull the cluster apart instead of refining a simple root
        val, der = _horner(coeffs, roots)
        safe = np.abs(der) > 0
        step = np.where(safe, val / np.where(safe, der, 1.0), 0.0)
        gap = np.abs(roots[:, :, None] - roots[:, None, :])
        gap[:, np.arange(d), np.arange(d)] = np.inf
        ok = np.isfinite(step) & (np.abs(step) < 0.1 * gap.min(axis=2))
        roots = np.where(ok, roots - step, roots)
    elif polish:
        roots = -coeffs[:, 1:] / coeffs[:, :1]
    val, _ = _horner(coeffs, roots)
    absc = np.abs(coeffs)
    mag = np.zeros(roots.shape)
    ar = np.abs(roots)
    for j in range(d + 1):
        mag = mag * ar + absc[:, j:j + 1]
    residual = (np.abs(val) / np.maximum(mag, np.finfo(float).tiny)).max(axis=1)
    order = np.lexsort((roots.imag, roots.real), axis=1)
    roots = np.take_along_axis(roots, order, axis=1)
    return roots, residual


def univariate_roots(coeffs: Iterable[complex]) -> list[complex]:
    """All ``d`` roots of ``c[0] y^d + ... + c[d]`` with multiplicity.

    Companion-matrix eigenvalues followed by one Newton polish per simple
    root.
    Roots come back sorted by real part, then imaginary part.

    >>> univariate_roots([1, 0, 1])
    [-1j, 1j]
    """
    c = np.asarray(list(coeffs), dtype=np.complex128)
    if c.ndim != 1 or c.size < 2:
        raise InputError("need at least two coefficients")
    roots, _ = roots_batch(c[None, :])
    return [complex(r) for r in roots[0]]


# -- serialization ------------------------------------------------------------

def to_json_dict(poly: HomogeneousPolynomial) -> dict:
    return {
        "num_vars": poly.num_vars,
        "degree": poly.degree,
        "terms": [{"exponents": list(k), "re": float(v.real), "im": float(v.imag)}
                  for k, v in poly.terms.items()],
    }


def from_json_dict(data: Mapping) -> HomogeneousPolynomial:
    try:
        num_vars = int(data["num_vars"])
        degree = int(data["degree"])
        terms = {}
        for t in data["terms"]:
            key = tuple(int(e) for e in t["exponents"])
            terms[key] = terms.get(key, 0) + complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed polynomial JSON: {exc}") from exc
    return HomogeneousPolynomial(num_vars, degree, terms)


def loads(text: str) -> HomogeneousPolynomial:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("polynomial JSON must be an object")
    return from_json_dict(data)


def dumps(poly: HomogeneousPolynomial) -> str:
    return json.dumps(to_json_dict(poly))


_VAR = re.compile(r"z(\d+)(?:\^(\d+))?$")
_NUM = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def _parse_coefficient(tok: str) -> complex:
    tok = tok.strip()
    if tok.startswith("(") and tok.endswith(")"):
        tok = tok[1:-1]
    tok = tok.replace(" ", "").replace("i", "j")
    if tok in ("j", "+j", "-j"):
        tok = tok.replace("j", "1j")
    try:
        return complex(tok)
    except ValueError as exc:
        raise InputError(f"bad coefficient {tok!r}") from exc


def _split_terms(text: str) -> list[str]:
    terms, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise InputError("unbalanced parentheses")
        if ch in "+-" and depth == 0 and cur.strip() and not cur.rstrip().endswith(("*", "^", "e", "E")):
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    if depth != 0:
        raise InputError("unbalanced parentheses")
    if cur.strip():
        terms.append(cur)
    return terms


def parse_text(text: str, num_vars: int | None = None) -> HomogeneousPolynomial:
    """Parse shorthand such as ``"z0^2 + z1^2 + z2^2"`` or ``"(1+2i)*z0*z1^2"``.

    ``num_vars`` defaults to one more than the largest variable index.
    """
    raw = []
    for term in _split_terms(text.replace(" ", "")):
        sign = 1.0
        body = term
        while body and body[0] in "+-":
            if body[0] == "-":
                sign = -sign
            body = body[1:]
        if not body:
            raise InputError(f"empty term in {text!r}")
        coeff = complex(sign)
        powers: dict[int, int] = {}
        for factor in body.split("*"):
            if not factor:
                raise InputError(f"empty factor in {term!r}")
            m = _VAR.match(factor)
            if m:
                idx = int(m.group(1))
                powers[idx] = powers.get(idx, 0) + int(m.group(2) or 1)
            elif factor.startswith("(") or _NUM.match(factor) or factor in ("i", "j"):
                coeff *= _parse_coefficient(factor)
            else:
                raise InputError(f"cannot parse factor {factor!r}")
        raw.append((powers, coeff))
    if not raw:
        raise InputError("empty polynomial")
    max_idx = max((max(p) for p, _ in raw if p), default=-1)
    n = num_vars if num_vars is not None else max_idx + 1
    if max_idx >= n:
        raise InputError(f"variable z{max_idx} exceeds num_vars={n}")
    degrees = {sum(p.values()) for p, _ in raw}
    if len(degrees) != 1:
        raise InputError(f"polynomial is not homogeneous (degrees {sorted(degrees)})")
    degree = degrees.pop()
    if degree < 1:
        raise InputError("degree must be at least 1")
    terms: dict = {}
    for powers, coeff in raw:
        key = tuple(powers.get(i, 0) for i in range(n))
        terms[key] = terms.get(key, 0) + coeff
    return HomogeneousPolynomial(n, degree, terms)


def _fmt_coeff(c: complex) -> str:
    if c.imag == 0:
        r = c.real
        return repr(int(r)) if float(r).is_integer() else repr(r)
    return f"({c.real!r}{c.imag:+}i)"


def to_text(poly: HomogeneousPolynomial) -> str:
    if poly.is_zero:
        return "0"
    out = ""
    for exps, c in poly.terms.items():
        factors = [f"z{i}^{e}" if e > 1 else f"z{i}" for i, e in enumerate(exps) if e]
        sign = "-" if c.imag == 0 and c.real < 0 else "+"
        c = -c if sign == "-" else c
        if c != 1 or not factors:
            factors.insert(0, _fmt_coeff(c))
        term = "*".join(factors)
        out = (f"-{term}" if sign == "-" else term) if not out else f"{out} {sign} {term}"
    return out


def fermat(degree: int, num_vars: int = 3) -> HomogeneousPolynomial:
    """``z0^d + z1^d + ... + z_{n-1}^d``."""
    terms = {}
    for i in range(num_vars):
        e = [0] * num_vars
        e[i] = degree
        terms[tuple(e)] = 1.0
    return HomogeneousPolynomial(num_vars, degree, terms)


def random_polynomial(degree: int, num_vars: int, seed: int) -> HomogeneousPolynomial:
    """Dense polynomial with standard complex Gaussian coefficients."""
    rng = np.random.default_rng(seed)
    terms = {}
    for exps in _monomials(degree, num_vars):
        terms[exps] = complex(rng.standard_normal(), rng.standard_normal()) / np.sqrt(2)
    return HomogeneousPolynomial(num_vars, degree, terms)


def _monomials(degree, num_vars):
    if num_vars == 1:
        yield (degree,)
        return
    for e in range(degree, -1, -1):
        for rest in _monomials(degree - e, num_vars - 1):
            yield (e,) + rest
