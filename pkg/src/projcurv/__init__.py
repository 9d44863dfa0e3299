"""Total absolute curvature of complex projective hypersurfaces.

Fubini-Study geometry at holomorphic sectional curvature 4, shape-operator
spectra of Hopf lifts, radial curvature profiles, Monte Carlo integration
over plane curves and surfaces in CP^3, and exact Betti-number checks.
"""
__version__ = "0.1.0"

from .errors import (BranchContinuationError, DegenerateFiber, DomainError, GapError,
                     InputError, InvalidBettiError, NumericalError, ProjcurvError,
                     SingularPointError, SpectrumStructureError)
from .polynomial import (HomogeneousPolynomial, evaluate, fermat, parse_text,
                         partial_derivative, random_polynomial, univariate_roots)
from .fubini_study import (ChartPoint, ProjectivePoint, SpherePoint, fs_kahler_potential,
                           fs_volume, hopf_lift, hopf_project, sample_cp1_fs)
from .spectrum import (FrameData, PrincipalSpectrum, frames_at, principal_spectrum,
                       rotate_normal, second_fundamental_form)
from .radial import (RadialContext, cp_integrand, cp_integrand_symmetric,
                     curve_pointwise_closed_form, dexp_det, euclidean_density_check,
                     lift_identity_check, radial_quadrature, sphere_integrand)
from .curves import (BranchPoint, CurvatureSample, branch_density, branches_over,
                     gauss_equation_check, gaussian_curvature)
from .integrator import (CurvatureEstimate, area, gauss_bonnet, mean_curvature,
                         total_curvature_curve, total_curvature_hypersurface,
                         total_curvature_sphere_lift)
from .topology import (BettiVector, average_curvature, check_basicestimate, check_cpcl_a,
                       check_detailedestimate, classify_degree, degree_interval,
                       gysin_transfer, hypersurface_betti)
from .kernels import BACKEND

__all__ = [
    "__version__",
    "BranchContinuationError",
    "DegenerateFiber",
    "DomainError",
    "GapError",
    "InputError",
    "InvalidBettiError",
    "NumericalError",
    "ProjcurvError",
    "SingularPointError",
    "SpectrumStructureError",
    "HomogeneousPolynomial",
    "evaluate",
    "fermat",
    "parse_text",
    "partial_derivative",
    "random_polynomial",
    "univariate_roots",
    "ChartPoint",
    "ProjectivePoint",
    "SpherePoint",
    "fs_kahler_potential",
    "fs_volume",
    "hopf_lift",
    "hopf_project",
    "sample_cp1_fs",
    "FrameData",
    "PrincipalSpectrum",
    "frames_at",
    "principal_spectrum",
    "rotate_normal",
    "second_fundamental_form",
    "RadialContext",
    "cp_integrand",
    "cp_integrand_symmetric",
    "curve_pointwise_closed_form",
    "dexp_det",
    "euclidean_density_check",
    "lift_identity_check",
    "radial_quadrature",
    "sphere_integrand",
    "BranchPoint",
    "CurvatureSample",
    "branch_density",
    "branches_over",
    "gauss_equation_check",
    "gaussian_curvature",
    "CurvatureEstimate",
    "area",
    "gauss_bonnet",
    "mean_curvature",
    "total_curvature_curve",
    "total_curvature_hypersurface",
    "total_curvature_sphere_lift",
    "BettiVector",
    "average_curvature",
    "check_basicestimate",
    "check_cpcl_a",
    "check_detailedestimate",
    "classify_degree",
    "degree_interval",
    "gysin_transfer",
    "hypersurface_betti",
    "BACKEND",
]
