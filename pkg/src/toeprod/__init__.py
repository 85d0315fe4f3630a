"""Spectra of products of Toeplitz matrices and large deviations of Gaussian quadratic forms."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .symbol import (  # noqa: F401
    AR1Density,
    Pointwise,
    Reflected,
    Symbol,
    TrigPoly,
    constant,
    cosine,
    exp_mode,
    fourier_coeff,
    symbol_from_json,
    symbol_range,
    sup_norm,
    trig_poly,
)
from .matrices import (  # noqa: F401
    ar1_inverse_tridiagonal,
    flip,
    hankel_section,
    toeplitz_section,
    widom_residual,
)
from .eigen import det, hermitian_eig, psd_sqrt, slogdet, solve  # noqa: F401
from .spectrum import (  # noqa: F401
    convergence_sweep,
    essential_interval,
    example1_limits,
    example_pair,
    localization_profile,
    pencil_zero_check,
    product_spectrum,
    szego_average,
)
from .ldp import ProductCgf, finite_n_cgf, legendre, rate_function  # noqa: F401
from .gauss import SimulationConfig, simulate_quadratic_forms, tail_study  # noqa: F401
