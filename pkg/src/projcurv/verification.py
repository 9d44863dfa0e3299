"""Verification suite: each check returns a :class:`CriterionResult`.

The same functions back the ``verify`` CLI command and the acceptance tests.
Sample sizes are chosen so each check fits its runtime budget on one core.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import integrator as itg
from . import radial as rad
from .curves import extrinsic_curvature_batch, gaussian_curvature_batch
from .errors import ProjcurvError
from .fubini_study import block_generator
from .polynomial import HomogeneousPolynomial, fermat, parse_text, random_polynomial
from .spectrum import spectra_batch
from .topology import (all_checks, check_cpcl_a, classify_degree, degree_interval,
                       gysin_transfer, hypersurface_betti, jensen_value, middle_sum)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.title} ({self.seconds:.1f}s)"


#: Wall-time budgets in seconds, by criterion number.
BUDGETS = {1: 60.0, 2: 120.0, 11: 1800.0}
#: Budget for each degree of criterion 3.
PER_DEGREE_BUDGET = 600.0


def line_curve() -> HomogeneousPolynomial:
    return parse_text("z1", 3)


def random_cubic(seed: int = 11) -> HomogeneousPolynomial:
    return random_polynomial(3, 3, seed)


def random_quartic(seed: int = 5) -> HomogeneousPolynomial:
    return random_polynomial(4, 3, seed)


def random_points(F: HomogeneousPolynomial, count: int, seed: int) -> np.ndarray:
    """Unit representatives of ``count`` random points of ``V(F)``."""
    plan = itg.plan_projections(F, seed)
    fp = itg.fiber_points(plan, max(64, count), seed)
    w = fp.jac / fp.jac.sum()
    rng = block_generator(seed, 41, 0)
    pick = rng.choice(w.size, size=count, replace=w.size < count, p=w)
    Z = fp.Z[pick]
    if plan.rotation is not None:
        Z = Z @ plan.rotation.T
    return Z


def _z(est, target):
    return abs(est.value - target) / est.std_error if est.std_error > 0 else (
        0.0 if abs(est.value - target) < 1e-9 else math.inf)


def _est(e) -> dict:
    return {"value": e.value, "std_error": e.std_error, "samples": e.n_samples,
            "rejected": e.n_rejected}


# -- criteria -------------------------------------------------------------------------

def criterion_1(samples: int = 100_000, seed: int = 1) -> CriterionResult:
    e = itg.total_curvature_curve(line_curve(), samples, seed)
    ok = abs(e.value - 2.0) <= 0.02
    return CriterionResult(1, "line T = 2 +- 0.02", ok, {"T": _est(e)})


def criterion_2(samples: int = 100_000, seed: int = 2) -> CriterionResult:
    F = fermat(2)
    T = itg.total_curvature_curve(F, samples, seed)
    A = itg.area(F, samples, seed + 1)
    Z = random_points(F, 100, seed)
    K, ok = gaussian_curvature_batch(F, Z)
    kerr = float(np.max(np.abs(K - 2.0))) if ok.all() else math.inf
    passed = (abs(T.value - 4.0) <= 0.05 and abs(A.value / (2 * math.pi) - 1) <= 0.005
              and kerr <= 1e-3)
    return CriterionResult(2, "conic T = 4 +- 0.05, area 2pi +- 0.5%, K = 2 +- 1e-3", passed,
                           {"T": _est(T), "area": _est(A), "max_K_error": kerr})


def criterion_3(samples: int = 100_000, seed: int = 3, degrees=(3, 4, 5)) -> CriterionResult:
    details, passed = {}, True
    for d in degrees:
        t0 = time.perf_counter()
        e = itg.total_curvature_curve(fermat(d), samples, seed + d)
        lo, hi = degree_interval(d)
        inside = (e.value - 3 * e.std_error > lo) and (e.value + 3 * e.std_error < hi)
        try:
            cls = classify_degree(e.value)
        except ProjcurvError:
            cls = None
        rel = e.std_error / e.value
        secs = time.perf_counter() - t0
        ok = inside and cls == d and rel < 0.01 and secs <= PER_DEGREE_BUDGET
        passed &= ok
        details[f"d={d}"] = {**_est(e), "interval": [lo, hi], "classified": cls,
                             "relative_error": rel, "seconds": secs, "passed": ok}
    return CriterionResult(3, "Fermat d=3,4,5 strictly inside degree interval; classify", passed,
                           details)


def _curves_upto4():
    return [(1, line_curve()), (2, fermat(2)), (3, fermat(3)), (4, fermat(4))]


def criterion_4(samples: int = 204_800, seed: int = 4) -> CriterionResult:
    details, passed = {}, True
    for d, F in _curves_upto4():
        e = itg.gauss_bonnet(F, samples, seed + d)
        chi = 2 - (d - 1) * (d - 2)
        ok = abs(e.value - chi) <= 0.02
        passed &= ok
        details[f"d={d}"] = {**_est(e), "expected": chi, "passed": ok}
    return CriterionResult(4, "Gauss-Bonnet chi within 0.02 for d <= 4", passed, details)


def criterion_5(samples: int = 102_400, seed: int = 5) -> CriterionResult:
    details, passed = {}, True
    for d, F in _curves_upto4():
        e = itg.mean_curvature(F, samples, seed + d)
        target = 2.0 * (3 - d)
        z = _z(e, target)
        ok = z <= 3.0
        passed &= ok
        details[f"d={d}"] = {**_est(e), "expected": target, "z": z, "passed": ok}
    return CriterionResult(5, "area-weighted mean K = 2(3-d) within 3 sigma", passed, details)


def _spectrum_curves():
    return {"line": line_curve(), "conic": fermat(2), "fermat_cubic": fermat(3),
            "random_quartic": random_quartic()}


def spectrum_checks(F: HomogeneousPolynomial, count: int = 100, seed: int = 6) -> dict:
    Z = random_points(F, count, seed)
    rng = block_generator(seed, 43, 0)
    sp = spectra_batch(F, Z)
    scale = np.maximum(1.0, np.abs(sp["eigenvalues"]).max(axis=1))
    fiber = float(np.max(sp["fiber_residual"] / scale))
    pairing = float(np.max(sp["pairing_residual"] / scale))
    trace = float(np.max(sp["trace_ratio"]))
    theta = rng.uniform(0, 2 * np.pi, count)
    rot = spectra_batch(F, Z, theta)
    phase = rng.uniform(0, 2 * np.pi, count)
    lift = spectra_batch(F, Z * np.exp(1j * phase)[:, None])
    rot_err = float(np.max(np.abs(rot["kappas"] - sp["kappas"])))
    phase_err = float(np.max(np.abs(lift["kappas"] - sp["kappas"])))
    valid = bool(sp["ok"].all() and rot["ok"].all() and lift["ok"].all())
    ok = (valid and fiber < 1e-7 and pairing < 1e-7 and trace < 1e-9 and rot_err < 1e-8
          and phase_err < 1e-8)
    return {"fiber": fiber, "pairing": pairing, "trace": trace, "rotation": rot_err,
            "phase": phase_err, "valid": valid, "passed": ok}


def criterion_6(count: int = 100, seed: int = 6, curves=None) -> CriterionResult:
    curves = _spectrum_curves() if curves is None else curves
    details = {name: spectrum_checks(F, count, seed) for name, F in curves.items()}
    passed = all(v["passed"] for v in details.values())
    return CriterionResult(6, "spectrum structure, rotation and fiber-phase invariance", passed,
                           details)


def gauss_equation_errors(F: HomogeneousPolynomial, count: int = 100, seed: int = 7) -> dict:
    Z = random_points(F, count, seed)
    K_int, ok1 = gaussian_curvature_batch(F, Z)
    K_ext, _, ok2 = extrinsic_curvature_batch(F, Z)
    valid = bool(ok1.all() and ok2.all())
    err = float(np.max(np.abs(K_int - K_ext))) if valid else math.inf
    return {"max_error": err, "valid": valid, "passed": err < 1e-4}


def criterion_7(count: int = 100, seed: int = 7, curves=None) -> CriterionResult:
    curves = _spectrum_curves() if curves is None else curves
    details = {name: gauss_equation_errors(F, count, seed) for name, F in curves.items()}
    passed = all(v["passed"] for v in details.values())
    return CriterionResult(7, "Gauss equation: intrinsic K = 4 - 2 kappa^2 within 1e-4", passed,
                           details)


def criterion_8(samples: int = 40_960, seed: int = 8) -> CriterionResult:
    routes = {"curve": itg.total_curvature_curve, "radial": itg.total_curvature_hypersurface,
              "sphere": itg.total_curvature_sphere_lift}
    details, passed = {}, True
    for name, F in [("line", line_curve()), ("conic", fermat(2)), ("random_cubic", random_cubic())]:
        # independent seeds so the combined error bar is meaningful
        ests = {r: fn(F, samples, seed + 100 * i) for i, (r, fn) in enumerate(routes.items())}
        pairs = {}
        for a, b in [("curve", "radial"), ("curve", "sphere"), ("radial", "sphere")]:
            ea, eb = ests[a], ests[b]
            comb = math.hypot(ea.std_error, eb.std_error)
            diff = abs(ea.value - eb.value)
            ok = diff <= 3 * comb if comb > 0 else diff < 1e-9
            passed &= ok
            pairs[f"{a}-{b}"] = {"diff": diff, "combined_sigma": comb, "passed": ok}
        details[name] = {"estimates": {r: _est(e) for r, e in ests.items()}, "pairs": pairs}
    return CriterionResult(8, "three routes agree within combined 3 sigma", passed, details)


def _rel(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.max(np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-300)))


def identity_errors(draws: int = 1000, seed: int = 9) -> dict:
    rng = block_generator(seed, 44, 0)
    worst = {"symmetric": 0.0, "lift": 0.0, "dexp": 0.0, "euclidean": 0.0,
             "symmetric_term_scaled": 0.0}
    for _ in range(draws):
        N = int(rng.integers(2, 5))
        m = int(rng.integers(1, N))
        kap = tuple(rng.uniform(0, 3, m))
        ctx = rad.RadialContext(N, m, kap)
        r = rng.uniform(1e-3, math.pi / 2 - 1e-3)
        a = rad.cp_integrand(ctx, r)
        b = rad.cp_integrand_symmetric(ctx, r)
        worst["symmetric"] = max(worst["symmetric"], _rel(a, b))
        worst["symmetric_term_scaled"] = max(worst["symmetric_term_scaled"], _rel_scaled(a, b, ctx, r))
        lhs, rhs = rad.lift_identity_check(ctx, r)
        worst["lift"] = max(worst["lift"], _rel(lhs, rhs))
        dd = abs(rad.dexp_det(ctx, r)) * r ** ctx.codim_exponent
        worst["dexp"] = max(worst["dexp"], _rel(dd, a))
        n = int(rng.integers(1, 6))
        Ns = n + int(rng.integers(1, 4))
        eigs = rng.normal(0, 2, n)
        th = rng.uniform(0, math.pi)
        l2, r2 = rad.euclidean_density_check(eigs, Ns, th)
        worst["euclidean"] = max(worst["euclidean"], _rel(l2, r2))
    Ks = np.concatenate([np.linspace(-50, 4, 1001), rng.uniform(-50, 4, 1000)])
    quad = rad.radial_quadrature_batch(2, 1, rad.kappa_from_K(Ks)[:, None])
    closed = rad.curve_pointwise_closed_form(Ks)
    worst["closed_form_vs_quadrature"] = float(np.max(np.abs(quad - closed)))
    return worst


def _rel_scaled(a, b, ctx, r):
    """Error relative to the size of the unsigned terms (diagnostic: the
    expanded sum cancels near a kink, where plain relative error grows)."""
    c, s = math.cos(r), math.sin(r)
    size = c * s ** ctx.codim_exponent
    for k in ctx.kappas:
        size *= c * c + k * k * s * s
    return abs(float(a) - float(b)) / max(size, 1e-300)


def criterion_9(draws: int = 1000, seed: int = 9) -> CriterionResult:
    w = identity_errors(draws, seed)
    passed = (w["symmetric"] < 1e-12 and w["lift"] < 1e-12 and w["dexp"] < 1e-12
              and w["euclidean"] < 1e-12 and w["closed_form_vs_quadrature"] < 1e-10)
    return CriterionResult(9, "pointwise identities to 1e-12, closed form vs quadrature 1e-10",
                           passed, w)


def criterion_10(dmax: int = 100) -> CriterionResult:
    expected = {"line": ((1, 1), (1, 0, 0, 1)), "cubic": ((3, 1), (1, 2, 2, 1)),
                "quadric_surface": ((2, 2), (1, 0, 1, 1, 0, 1))}
    details, passed = {}, True
    for name, ((d, m), lift) in expected.items():
        b = hypersurface_betti(d, m)
        got = gysin_transfer(b)
        ok = got.dims == lift and got.total == middle_sum(b)
        passed &= ok
        details[name] = {"betti": b.dims, "lift": got.dims, "passed": ok}
    jensen = all(jensen_value(d) == 2 * d * d - 4 * d + 4 for d in range(1, dmax + 1))
    gaps = all(degree_interval(d + 1)[0] - degree_interval(d)[1] == 2 for d in range(1, dmax + 1))
    ends = all(classify_degree(x) == d for d in range(1, dmax + 1) for x in degree_interval(d))
    passed &= jensen and gaps and ends
    details.update({"jensen": jensen, "gap_two": gaps, "classify_endpoints": ends})
    return CriterionResult(10, "Gysin transfers, Jensen identity, interval gaps", passed, details)


def criterion_11(samples: int = 20_480, seed: int = 11) -> CriterionResult:
    F = fermat(2, 4)
    e = itg.total_curvature_hypersurface(F, samples, seed)
    b = hypersurface_betti(2, 2)
    rel = e.std_error / e.value
    lower_ok = e.value >= middle_sum(b) - 3 * e.std_error
    cpcl = check_cpcl_a(b, max(e.value, 2.0))
    passed = rel < 0.02 and lower_ok and cpcl.passed
    return CriterionResult(11, "quadric surface: error < 2%, T >= 4 - 3 sigma, Betti-sum bound",
                           passed, {"T": _est(e), "relative_error": rel,
                                    "betti": b.dims, "betti_sum_margin": cpcl.margin,
                                    "checks": [c.__dict__ for c in all_checks(b, max(e.value, 2.0))]})


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
    11: criterion_11,
}


def _quick_6():
    return criterion_6(curves={"line": line_curve(), "conic": fermat(2)})


def _quick_7():
    return criterion_7(curves={"line": line_curve(), "conic": fermat(2)})


SUITES = {
    "quick": {1: criterion_1, 2: criterion_2, 6: _quick_6, 7: _quick_7, 9: criterion_9,
              10: criterion_10},
    "full": CRITERIA,
}


def run_criterion(fn: Callable[[], CriterionResult]) -> CriterionResult:
    """Run one criterion and enforce its wall-time budget, if it has one."""
    t0 = time.perf_counter()
    res = fn()
    res.seconds = time.perf_counter() - t0
    budget = BUDGETS.get(res.number)
    if budget is not None:
        res.details["budget_seconds"] = budget
        res.passed = res.passed and res.seconds <= budget
    return res


def run_suite(name: str, echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    from .errors import InputError
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    out = []
    for _, fn in sorted(SUITES[name].items()):
        res = run_criterion(fn)
        if echo:
            echo(res.line())
        out.append(res)
    return out
