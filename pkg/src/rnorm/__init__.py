"""Representational cost of functions as infinite-width two-layer ReLU networks.

The central quantity is the R-norm: the minimal total-variation norm of the
even measure representing a function as a continuous-width two-layer ReLU
network.  The package provides exact radial calculators, a Radon/fractional-
Laplacian grid pipeline for d=2, minimum-norm measure fitting, and analysis
demos (infinite-norm certificates, the parallelogram-law failure, the
linear-unit gap).
"""

from .constants import Constants, constants, sphere_area
from .grids import GridFunction2D, sample_grid
from .piecewise import (
    DistributionalProfile,
    PiecewisePolynomial,
    profile_derivative,
    profile_l1,
    pw_derivative,
)
from .radon import (
    OffsetRangeError,
    RadialFunction,
    Sinogram,
    UnsupportedDimensionError,
    bump_poly,
    dual_radon_2d,
    fbp_inverse_2d,
    grid_radon_2d,
    radial_radon_profile,
)
from .spectral import (
    PwlCurvatureMeasure2D,
    RayDecaySample,
    frac_laplacian_2d,
    grid_fourier_ray,
    offset_power_derivative,
    pwl_fourier_ray,
)
from .engine import (
    FiniteReluNet,
    RbarBounds,
    RNormReport,
    grad_at_infinity,
    grad_at_infinity_estimate,
    laplacian_lower_bound,
    rbar_bounds,
    rnorm_finite_net,
    rnorm_grid_2d,
    rnorm_radial_odd,
    sobolev_upper_bound_2d,
)
from .fitting import (
    AtomicMeasure,
    FitProblem,
    FitResult,
    build_dictionary,
    even_part,
    lp_oracle,
    min_norm_fit,
    refinement_study,
)
from .analysis import (
    CertificateReport,
    bump_finiteness_sweep,
    parallelogram_check,
    pwl_infinite_certificate,
    pyramid_geometry,
    pyramid_pwl,
    pyramid_threelayer,
    rbar_gap_demo,
)

__all__ = [
    "AtomicMeasure",
    "CertificateReport",
    "Constants",
    "DistributionalProfile",
    "FiniteReluNet",
    "FitProblem",
    "FitResult",
    "GridFunction2D",
    "OffsetRangeError",
    "PiecewisePolynomial",
    "PwlCurvatureMeasure2D",
    "RNormReport",
    "RadialFunction",
    "RayDecaySample",
    "RbarBounds",
    "Sinogram",
    "UnsupportedDimensionError",
    "bump_finiteness_sweep",
    "bump_poly",
    "build_dictionary",
    "constants",
    "dual_radon_2d",
    "even_part",
    "fbp_inverse_2d",
    "frac_laplacian_2d",
    "grad_at_infinity",
    "grad_at_infinity_estimate",
    "grid_fourier_ray",
    "grid_radon_2d",
    "laplacian_lower_bound",
    "lp_oracle",
    "min_norm_fit",
    "offset_power_derivative",
    "parallelogram_check",
    "profile_derivative",
    "profile_l1",
    "pw_derivative",
    "pwl_fourier_ray",
    "pwl_infinite_certificate",
    "pyramid_geometry",
    "pyramid_pwl",
    "pyramid_threelayer",
    "radial_radon_profile",
    "rbar_bounds",
    "rbar_gap_demo",
    "refinement_study",
    "rnorm_finite_net",
    "rnorm_grid_2d",
    "rnorm_radial_odd",
    "sample_grid",
    "sobolev_upper_bound_2d",
    "sphere_area",
]
