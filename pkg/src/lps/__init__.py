"""Laguerre semigroups, Littlewood-Paley square functions, and kernel scans.

A numerical library for the harmonic analysis of Laguerre expansions of
convolution type on (0, inf)^d with the measure x^(2 alpha + 1) dx: the
orthonormal Laguerre function systems and their ladder operators, the heat
and Poisson semigroups (plain and modified) with their integral kernels, the
ten vertical and horizontal square functions, and a verification harness for
the Calderon-Zygmund standard estimates of the associated vector-valued
kernels.
"""

from .basis import (
    BasisFamily,
    Expansion,
    PLAIN,
    analyze,
    basis_eval,
    delta_apply,
    delta_star_apply,
    differentiated,
    eigenvalue,
    ell,
    laguerre_operator_apply,
    riesz_transform,
    synthesize,
)
from .czcheck import (
    EstimateReport,
    counterexample_profile,
    lemma_suite,
    random_expansion,
    riesz_identity_check,
    scan_growth,
    scan_smoothness,
)
from .gfunctions import GFunctionKind, gfun_exact, gfun_l2_exact, gfun_l2_norm, gfun_quadrature
from .kernels import (
    KernelKind,
    SingularPairError,
    TimeProfile,
    ZetaGrid,
    bnorm,
    heat_kernel_closed,
    heat_kernel_schlafli,
    heat_kernel_spectral,
    kernel_entry,
    kernel_entry_fd,
    kernel_values,
    modified_heat_kernel,
    poisson_kernel,
    t_of_zeta,
    zeta_of_t,
)
from .measure import AlphaParam, as_alpha, doubling_ratio, mu_ball, mu_box, pi_alpha_integrate
from .specfun import (
    QuadratureRule,
    gamma_fn,
    gauss_jacobi_rule,
    gauss_laguerre_rule,
    gauss_legendre_rule,
    laguerre_poly,
    scaled_bessel_i,
)

__version__ = "0.1.0"
