"""Scalar special functions and Gaussian quadrature rules.

Everything else in the package reduces to a handful of scalar primitives:
the gamma function, generalized Laguerre polynomials, the scaled modified
Bessel function i_nu(z) = z^(-nu) I_nu(z), and Gauss rules for the weights
u^a e^(-u) on (0, inf) and (1-s^2)^(a-1/2) on (-1, 1).

The scaled Bessel form is used because the heat kernel only ever needs the
combination (x y)^(-nu) I_nu(x y / sinh 2t), which is entire in the argument;
the raw I_nu would introduce a spurious 0 * inf ambiguity at the origin.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, ive, roots_genlaguerre, roots_jacobi

__all__ = [
    "QuadratureRule",
    "gamma_fn",
    "laguerre_poly",
    "scaled_bessel_i",
    "scaled_bessel_i_exp",
    "log_scaled_bessel_i",
    "log_bessel_mantissa",
    "bessel_ratio",
    "gauss_laguerre_rule",
    "gauss_jacobi_rule",
    "gauss_legendre_rule",
]

# Power series below this argument, exponentially scaled regime above.
# Near z = 20 the series still converges fast (positive terms, no
# cancellation) while e^z is far from overflow, so both regimes are safe
# on their own side of the switch.
BESSEL_SERIES_CUTOFF = 20.0
_SERIES_TERMS = 80


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights of a Gauss rule on its canonical interval."""

    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    params: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        if self.nodes.ndim != 1 or self.nodes.shape != self.weights.shape:
            raise ValueError("nodes and weights must be 1-d arrays of equal length")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")

    def integrate(self, f) -> float:
        return float(np.sum(self.weights * f(self.nodes)))


def gamma_fn(z: float) -> float:
    """Gamma(z) for z > 0."""
    if z <= 0:
        raise ValueError(f"gamma_fn requires z > 0, got {z}")
    return math.gamma(z)


def laguerre_poly(k: int, a: float, x):
    """Generalized Laguerre polynomial L_k^a(x) by upward recurrence.

    Stable for the k <= ~40 range used here; vectorized over x.
    """
    if k < 0 or k != int(k):
        raise ValueError(f"degree must be a nonnegative integer, got {k}")
    if a <= -1:
        raise ValueError(f"order must exceed -1, got {a}")
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if k == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = 1.0 + a - x
    for m in range(1, k):
        p, p_prev = ((2 * m + 1 + a - x) * p - (m + a) * p_prev) / (m + 1), p
    return p if p.ndim else float(p)


def _bessel_series(nu: float, z: np.ndarray) -> np.ndarray:
    """Ascending series of i_nu(z) = 2^-nu sum_m (z^2/4)^m / (m! Gamma(m+nu+1))."""
    w = z * z / 4.0
    term = np.full_like(w, math.exp(-nu * math.log(2.0) - gammaln(nu + 1.0)))
    acc = term.copy()
    for m in range(_SERIES_TERMS):
        term = term * w / ((m + 1.0) * (m + nu + 1.0))
        acc += term
        if np.all(term <= 1e-18 * acc):
            break
    return acc


def _check_bessel_args(nu: float, z) -> np.ndarray:
    if nu < -0.5:
        raise ValueError(f"order must be >= -1/2, got {nu}")
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise ValueError("argument must be >= 0")
    return z


def scaled_bessel_i_exp(nu: float, z):
    """i_nu(z) as a pair (mantissa, exponent) with value = mantissa * e^exponent.

    The exponent is 0 in the series regime and z in the scaled regime, so the
    mantissa never overflows; consumers combine the exponent with Gaussian
    log-factors before exponentiating.
    """
    z = _check_bessel_args(nu, z)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    mant = np.empty_like(z)
    expo = np.zeros_like(z)
    small = z < BESSEL_SERIES_CUTOFF
    if np.any(small):
        mant[small] = _bessel_series(nu, z[small])
    if np.any(~small):
        zl = z[~small]
        mant[~small] = ive(nu, zl) * zl ** (-nu)
        expo[~small] = zl
    if scalar:
        return float(mant[0]), float(expo[0])
    return mant, expo


def scaled_bessel_i(nu: float, z):
    """i_nu(z) = z^(-nu) I_nu(z); overflows for z beyond ~700 (use the exp pair)."""
    mant, expo = scaled_bessel_i_exp(nu, z)
    return mant * np.exp(expo)


def log_scaled_bessel_i(nu: float, z):
    """log i_nu(z), safe for the whole double range of z."""
    mant, expo = scaled_bessel_i_exp(nu, z)
    return np.log(mant) + expo


def log_bessel_mantissa(nu: float, z):
    """log(e^-z i_nu(z)), the exponentially damped part of the Bessel factor.

    Consumers that absorb the e^z growth into a Gaussian exponent add this
    instead of log i_nu.
    """
    mant, expo = scaled_bessel_i_exp(nu, z)
    return np.log(mant) + (expo - np.asarray(z, dtype=float))


def _log_bessel_mantissa_any(nu: float, z):
    """log_bessel_mantissa without the nu >= -1/2 gate; valid for nu > -1.

    The public Bessel API enforces the order range the kernel estimates need,
    but the closed heat kernel itself exists on all of (-1, inf)^d.
    """
    if nu <= -1:
        raise ValueError(f"order must exceed -1, got {nu}")
    z = np.atleast_1d(np.asarray(z, dtype=float))
    mant = np.empty_like(z)
    expo = np.zeros_like(z)
    small = z < BESSEL_SERIES_CUTOFF
    if np.any(small):
        mant[small] = _bessel_series(nu, z[small])
    if np.any(~small):
        zl = z[~small]
        mant[~small] = ive(nu, zl) * zl ** (-nu)
        expo[~small] = zl
    return np.log(mant) + (expo - z)


def bessel_ratio(nu: float, z):
    """Ratio i_(nu+1)(z) / i_nu(z); equals the log-derivative of i_nu over z.

    Positive, smooth, ~ 1/(2 nu + 2) at z = 0 and ~ 1/z at infinity.
    """
    z = _check_bessel_args(nu, z)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    small = z < BESSEL_SERIES_CUTOFF
    if np.any(small):
        zs = z[small]
        out[small] = _bessel_series(nu + 1.0, zs) / _bessel_series(nu, zs)
    if np.any(~small):
        zl = z[~small]
        out[~small] = ive(nu + 1.0, zl) / (zl * ive(nu, zl))
    return float(out[0]) if scalar else out


def gauss_laguerre_rule(n: int, a: float = 0.0) -> QuadratureRule:
    """Gauss rule for the weight u^a e^(-u) on (0, inf), exact to degree 2n-1."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if a <= -1:
        raise ValueError(f"exponent must exceed -1, got {a}")
    nodes, weights = roots_genlaguerre(n, a)
    return QuadratureRule(nodes, weights, "gauss_laguerre", (n, a))


def gauss_jacobi_rule(n: int, a: float) -> QuadratureRule:
    """Gauss rule for the weight (1-s^2)^(a-1/2) on (-1, 1), exact to degree 2n-1.

    The boundary case a = -1/2 is a pair of point masses, not a quadrature
    weight, and is handled by the measure layer instead.
    """
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if a <= -0.5:
        raise ValueError(f"exponent must exceed -1/2, got {a}")
    nodes, weights = roots_jacobi(n, a - 0.5, a - 0.5)
    return QuadratureRule(nodes, weights, "gauss_jacobi", (n, a))


def gauss_legendre_rule(n: int) -> QuadratureRule:
    """Gauss-Legendre rule on (-1, 1)."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return QuadratureRule(nodes, weights, "gauss_legendre", (n,))
