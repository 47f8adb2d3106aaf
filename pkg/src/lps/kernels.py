"""Heat and Poisson kernels, their derivatives, and L^2-in-time norms.

The heat kernel of the Laguerre semigroup in closed form is

    G_t(x, y) = (sinh 2t)^(-d-|a|) exp(-coth(2t)(|x|^2+|y|^2)/2)
                * prod_i i_(a_i)(x_i y_i / sinh 2t),

with i_nu the scaled Bessel function z^(-nu) I_nu(z).  All time dependence is
routed through zeta = tanh t and eta = 1 - zeta, kept as separate arrays:
then 1/sinh 2t = (1+zeta) eta / (2 zeta), coth 2t = (1+zeta^2)/(2 zeta) and
e^(-2t) = eta/(1+zeta) are exact at both endpoints, and the Gaussian exponent
is assembled cancellation-free as

    -(zeta/2)(|x|^2+|y|^2) - |x-y|^2 (1+zeta) eta / (4 zeta),

so evaluation survives t -> 0 and t -> inf in log space.  Time integrals over
(0, inf) with measure dt or t dt are computed on zeta panels graded
dyadically toward both endpoints: integrands behave like
zeta^(-a) exp(-c q/zeta) near 0 and like powers of eta, times a logarithm,
near 1.

Poisson kernels arise by subordination.  For the vector-valued entries the
u-integral is transposed to the time side: with tau = t^2/4u,

    dP/dt (x,y)   = pi^(-1/2) int tau^(-1/2) exp(-t^2/4tau) dG/dtau (x,y) dtau,
    delta P (x,y) = t/(2 sqrt(pi)) int tau^(-3/2) exp(-t^2/4tau) delta G (x,y) dtau,

so every Poisson entry is a fixed matrix (independent of x, y) applied to the
matching heat entry sampled on an inner tau grid.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import ell_table
from .measure import AlphaParam, as_alpha, pi_alpha_integrate
from .specfun import _log_bessel_mantissa_any, bessel_ratio

__all__ = [
    "SingularPairError",
    "zeta_of_t",
    "t_of_zeta",
    "ZetaGrid",
    "TimeProfile",
    "KernelKind",
    "KERNEL_TAGS",
    "bnorm",
    "heat_kernel_closed",
    "heat_kernel_spectral",
    "heat_kernel_schlafli",
    "modified_heat_kernel",
    "poisson_kernel",
    "subordination_u_rule",
    "kernel_values",
    "kernel_entry",
    "kernel_entry_fd",
]

LOG_FLOOR = -700.0  # below this, exp underflows; the value is exactly 0 in doubles
_MATMUL_BLOCK = 32


class SingularPairError(ValueError):
    """Raised when a kernel is requested on the diagonal x = y."""


def zeta_of_t(t: float) -> float:
    """zeta = tanh t, mapping (0, inf) to (0, 1)."""
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    return math.tanh(t)


def t_of_zeta(zeta: float) -> float:
    """Inverse substitution t = (1/2) log((1+zeta)/(1-zeta))."""
    if not 0 < zeta < 1:
        raise ValueError(f"zeta must lie in (0, 1), got {zeta}")
    return math.atanh(zeta)


def _eta_of_t(t) -> np.ndarray:
    """1 - tanh t = 2 e^(-2t)/(1 + e^(-2t)), accurate for all t > 0."""
    e2 = np.exp(-2.0 * np.asarray(t, dtype=float))
    return 2.0 * e2 / (1.0 + e2)


class ZetaGrid:
    """Gauss-Legendre panels on zeta in (0, 1), graded dyadically at both ends.

    eta = 1 - zeta is built directly panel-by-panel: near zeta = 1 the
    subtraction would cost 12 of its 52 bits, polluting t, the Jacobian
    1/(1 - zeta^2) and e^(-2t).
    """

    def __init__(self, order: int = 12, levels_zero: int = 40, levels_one: int = 40):
        if order < 2 or levels_zero < 2 or levels_one < 2:
            raise ValueError("grid needs order >= 2 and at least 2 levels per end")
        self.order = order
        self.levels_zero = levels_zero
        self.levels_one = levels_one
        xg, wg = np.polynomial.legendre.leggauss(order)
        zeta, eta, wz = [], [], []
        # panels [2^-m-1, 2^-m] climbing toward 1/2; the deepest one closes at 0
        for m in range(levels_zero, 0, -1):
            a, b = (0.0 if m == levels_zero else 0.5 ** (m + 1)), 0.5**m
            z = 0.5 * (b - a) * xg + 0.5 * (a + b)
            zeta.append(z)
            eta.append(1.0 - z)
            wz.append(0.5 * (b - a) * wg)
        # panels in eta descending from 1/2; the deepest one closes at eta = 0
        for m in range(1, levels_one + 1):
            a, b = (0.0 if m == levels_one else 0.5 ** (m + 1)), 0.5**m
            e = 0.5 * (b - a) * xg + 0.5 * (a + b)
            idx = np.argsort(-e)
            eta.append(e[idx])
            zeta.append(1.0 - e[idx])
            wz.append((0.5 * (b - a) * wg)[idx])
        self.zeta = np.concatenate(zeta)
        self.eta = np.concatenate(eta)
        self.wz = np.concatenate(wz)
        self.t = 0.5 * (np.log1p(self.zeta) - np.log(self.eta))
        self.jacobian = 1.0 / ((1.0 + self.zeta) * self.eta)

    @property
    def n(self) -> int:
        return self.zeta.size

    def time_weights(self, measure_kind: str) -> np.ndarray:
        """Quadrature weights for int f(t) dt (or t dt) pulled back to zeta."""
        if measure_kind == "dt":
            return self.wz * self.jacobian
        if measure_kind == "t_dt":
            return self.wz * self.t * self.jacobian
        raise ValueError(f"unknown measure kind {measure_kind!r}")

    def as_rule(self, measure_kind: str = "dt"):
        """The grid as a QuadratureRule on (0, 1) with the time weights baked in."""
        from .specfun import QuadratureRule

        return QuadratureRule(self.zeta, self.time_weights(measure_kind),
                              "zeta_time_grid", (self.order, measure_kind))

    def refined(self, factor: int = 2) -> "ZetaGrid":
        return ZetaGrid(self.order * factor, self.levels_zero, self.levels_one)


@dataclass
class TimeProfile:
    """A time-side function sampled on a zeta grid, with its L^2 weights."""

    measure_kind: str
    zeta_nodes: np.ndarray
    values: np.ndarray
    weights: np.ndarray

    def squared_norm(self) -> float:
        return float(np.sum(self.weights * self.values**2))


def bnorm(profile: TimeProfile) -> float:
    """L^2(dt) or L^2(t dt) norm of the profile."""
    return math.sqrt(profile.squared_norm())


# the ten vector-valued kernels: d* = time derivative, h* = space derivative,
# *mod = modified semigroup, Star = adjoint derivative on its own coordinate
KERNEL_TAGS = (
    "dT",
    "dP",
    "hT",
    "hP",
    "dTmod",
    "dPmod",
    "hTmod",
    "hPmod",
    "hTmodStar",
    "hPmodStar",
)

_NEEDS_I = {"hT", "hP", "hTmod", "hPmod"}
_NEEDS_J = {"dTmod", "dPmod", "hTmod", "hPmod", "hTmodStar", "hPmodStar"}
_DT_MEASURE = {"hT", "hTmod", "hTmodStar"}
_POISSON_OF = {"dP": "dT", "hP": "hT", "dPmod": "dTmod", "hPmod": "hTmod", "hPmodStar": "hTmodStar"}


@dataclass(frozen=True)
class KernelKind:
    """One of the ten kernel tags, with coordinates i (derivative) and j (family)."""

    tag: str
    i: int = 0
    j: int = 0

    def __post_init__(self):
        if self.tag not in KERNEL_TAGS:
            raise ValueError(f"unknown kernel tag {self.tag!r}")
        if self.tag in _NEEDS_I and self.i < 1:
            raise ValueError(f"{self.tag} needs a derivative coordinate i")
        if self.tag in _NEEDS_J and self.j < 1:
            raise ValueError(f"{self.tag} needs a semigroup coordinate j")
        if self.tag in ("hTmod", "hPmod") and self.i == self.j:
            raise ValueError(f"{self.tag} requires i != j (i = j is the Star kind)")

    @property
    def measure_kind(self) -> str:
        return "dt" if self.tag in _DT_MEASURE else "t_dt"

    @property
    def is_poisson(self) -> bool:
        return self.tag in _POISSON_OF

    def heat_counterpart(self) -> "KernelKind":
        return KernelKind(_POISSON_OF[self.tag], self.i, self.j)


def _pair_array(p, d: int) -> np.ndarray:
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if p.ndim == 1:
        if d == 1 and p.shape != (1,):
            p = p[:, None]
        else:
            p = p[None, :]
    if p.ndim != 2 or p.shape[1] != d:
        raise ValueError(f"points must have {d} coordinates")
    if np.any(p <= 0):
        raise ValueError("points must lie in the open positive orthant")
    return p


def _log_heat(acomp: np.ndarray, x: np.ndarray, y: np.ndarray, zeta, eta):
    """log G_t for pairs (P, d) at time nodes (T,); returns ((P,T), z=(P,d,T))."""
    inv_s = 0.5 * (1.0 + zeta) * eta / zeta  # 1 / sinh 2t
    sx = np.sum(x * x, axis=1)[:, None]
    sy = np.sum(y * y, axis=1)[:, None]
    sep = np.sum((x - y) ** 2, axis=1)[:, None]
    core = -0.5 * zeta * (sx + sy) - 0.5 * sep * inv_s
    with np.errstate(divide="ignore"):
        log_s = np.log(2.0 * zeta) - np.log1p(zeta) - np.log(eta)
    logg = core - (len(acomp) + acomp.sum()) * log_s
    z = x[:, :, None] * y[:, :, None] * inv_s
    for i, a in enumerate(acomp):
        logg = logg + _log_bessel_mantissa_any(a, z[:, i, :]).reshape(z[:, i, :].shape)
    return logg, z


def _exp_floor(logg: np.ndarray, factor: np.ndarray) -> np.ndarray:
    """factor * exp(logg) with exact zeros where the exponential underflows."""
    factor = np.broadcast_to(factor, logg.shape)
    out = np.zeros_like(logg)
    mask = logg > LOG_FLOOR
    with np.errstate(under="ignore"):
        out[mask] = factor[mask] * np.exp(logg[mask])
    return out


def _heat_kind_values(alpha: AlphaParam, kind: KernelKind, x, y, zeta, eta):
    """Values (P, T) of a heat-family kernel kind at time nodes (zeta, eta)."""
    inv_s = 0.5 * (1.0 + zeta) * eta / zeta
    coth2t = 0.5 * (1.0 + zeta * zeta) / zeta
    tag = kind.tag
    base = alpha if tag in ("dT", "hT") else alpha.shifted(kind.j)
    acomp = base.array()
    logg, z = _log_heat(acomp, x, y, zeta, eta)

    if tag in ("dT", "dTmod"):
        sx = np.sum(x * x, axis=1)[:, None]
        sy = np.sum(y * y, axis=1)[:, None]
        zr = np.zeros_like(logg)
        for i, a in enumerate(acomp):
            zi = z[:, i, :]
            zr += zi * zi * bessel_ratio(a, zi)
        factor = (
            -2.0 * coth2t * (len(acomp) + acomp.sum())
            + (sx + sy) * inv_s**2
            - 2.0 * coth2t * zr
        )
        if tag == "dTmod":
            factor = factor - 2.0
    elif tag in ("hT", "hTmod"):
        i = kind.i
        zi = z[:, i - 1, :]
        xi = x[:, i - 1][:, None]
        yi = y[:, i - 1][:, None]
        factor = xi * (1.0 - coth2t) + xi * yi * yi * bessel_ratio(acomp[i - 1], zi) * inv_s**2
    elif tag == "hTmodStar":
        j = kind.j
        zj = z[:, j - 1, :]
        xj = x[:, j - 1][:, None]
        yj = y[:, j - 1][:, None]
        aj = alpha.components[j - 1]
        factor = (
            xj * xj * (1.0 + coth2t)
            - (2.0 * aj + 2.0)
            - xj * xj * yj * yj * bessel_ratio(acomp[j - 1], zj) * inv_s**2
        )
    else:
        raise ValueError(f"{tag} is not a heat-family kind")

    vals = _exp_floor(logg, factor)
    e2t = eta / (1.0 + zeta)
    if tag in ("dTmod", "hTmod"):
        vals = vals * e2t * (x[:, kind.j - 1] * y[:, kind.j - 1])[:, None]
    elif tag == "hTmodStar":
        vals = vals * e2t * y[:, kind.j - 1][:, None]
    return vals


@lru_cache(maxsize=32)
def _default_inner_grid(order: int = 12) -> ZetaGrid:
    # extra depth toward zeta = 1 keeps subordination truncation below 1e-9
    return ZetaGrid(order=order, levels_zero=40, levels_one=60)


@lru_cache(maxsize=64)
def _subordination_matrix(outer: ZetaGrid, inner: ZetaGrid, cls: str) -> np.ndarray:
    """Matrix taking heat values on the inner tau grid to Poisson values."""
    t = outer.t[:, None]
    tau = inner.t[None, :]
    w = (inner.wz * inner.jacobian)[None, :]
    with np.errstate(under="ignore"):
        damp = np.exp(-(t * t) / (4.0 * tau))
    if cls == "dt_kind":
        return w * damp / (math.sqrt(math.pi) * np.sqrt(tau))
    if cls == "space_kind":
        return w * damp * t / (2.0 * math.sqrt(math.pi) * tau**1.5)
    raise ValueError(f"unknown subordination class {cls!r}")


def kernel_values(alpha, kind: KernelKind, x, y, grid: ZetaGrid,
                  inner: ZetaGrid | None = None) -> np.ndarray:
    """Batched kernel entries: values of shape (npairs, grid.n).

    x and y are (npairs, d) arrays of off-diagonal point pairs.
    """
    alpha = as_alpha(alpha)
    if not alpha.cz_eligible:
        raise ValueError("kernel entries require alpha in [-1/2, inf)^d")
    x = _pair_array(x, alpha.d)
    y = _pair_array(y, alpha.d)
    if x.shape != y.shape:
        raise ValueError("x and y batches must have matching shapes")
    if np.any(np.all(x == y, axis=1)):
        raise SingularPairError("kernel entries are undefined on the diagonal x = y")
    if not kind.is_poisson:
        return _heat_kind_values(alpha, kind, x, y, grid.zeta, grid.eta)
    inner = inner or _default_inner_grid()
    heat = _heat_kind_values(alpha, kind.heat_counterpart(), x, y, inner.zeta, inner.eta)
    cls = "dt_kind" if kind.tag in ("dP", "dPmod") else "space_kind"
    mat = _subordination_matrix(grid, inner, cls).T
    # fixed-shape blocks (zero-padded) keep the BLAS summation order, and
    # hence the report bytes, independent of how callers batch the pairs
    n = heat.shape[0]
    out = np.empty((n, grid.n))
    for start in range(0, n, _MATMUL_BLOCK):
        block = heat[start : start + _MATMUL_BLOCK]
        rows = block.shape[0]
        if rows < _MATMUL_BLOCK:
            block = np.vstack([block, np.zeros((_MATMUL_BLOCK - rows, heat.shape[1]))])
        out[start : start + rows] = (block @ mat)[:rows]
    return out


def kernel_entry(alpha, kind: KernelKind, x, y, grid: ZetaGrid | None = None,
                 inner: ZetaGrid | None = None) -> TimeProfile:
    """The vector-valued kernel entry at one pair (x, y), as a TimeProfile."""
    grid = grid or ZetaGrid()
    vals = kernel_values(alpha, kind, x, y, grid, inner)
    return TimeProfile(
        measure_kind=kind.measure_kind,
        zeta_nodes=grid.zeta,
        values=vals[0],
        weights=grid.time_weights(kind.measure_kind),
    )


def _heat_values_at_times(alpha: AlphaParam, t, x, y) -> np.ndarray:
    """G_t(x, y) for one pair at an array of times."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    zeta = np.tanh(t)
    eta = _eta_of_t(t)
    logg, _ = _log_heat(alpha.array(), x, y, zeta, eta)
    with np.errstate(under="ignore"):
        return np.where(logg[0] > LOG_FLOOR, np.exp(np.maximum(logg[0], LOG_FLOOR)), 0.0)


def heat_kernel_closed(alpha, t: float, x, y) -> float:
    """Heat kernel G_t(x, y) from the closed Bessel-product formula."""
    alpha = as_alpha(alpha)
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    x = _pair_array(x, alpha.d)
    y = _pair_array(y, alpha.d)
    return float(_heat_values_at_times(alpha, t, x, y)[0])


def heat_kernel_spectral(alpha, t: float, x, y, cutoff: int) -> float:
    """Partial spectral sum of the heat kernel through levels |k| <= cutoff."""
    alpha = as_alpha(alpha)
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    x = _pair_array(x, alpha.d)
    y = _pair_array(y, alpha.d)
    tx = ell_table(alpha, cutoff, x)
    ty = ell_table(alpha, cutoff, y)
    level = None
    for i in range(alpha.d):
        v = tx[i][:, 0] * ty[i][:, 0]
        level = v if level is None else np.convolve(level, v)
    n = np.arange(cutoff + 1)
    lam = 4.0 * n + 2.0 * alpha.total + 2.0 * alpha.d
    return float(np.sum(np.exp(-t * lam) * level[: cutoff + 1]))


def heat_kernel_schlafli(alpha, t: float, x, y, order: int = 64) -> float:
    """Heat kernel via the Schlafli-type integral against Pi_alpha.

    Valid for alpha in [-1/2, inf)^d, the range of the representation.
    """
    alpha = as_alpha(alpha)
    if not alpha.cz_eligible:
        raise ValueError("the integral representation requires alpha in [-1/2, inf)^d")
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    x = np.asarray(x, dtype=float).reshape(alpha.d)
    y = np.asarray(y, dtype=float).reshape(alpha.d)
    zeta = math.tanh(t)
    sq = float(np.dot(x, x) + np.dot(y, y))
    xy = x * y

    def integrand(s):
        cross = 2.0 * (s @ xy)
        with np.errstate(under="ignore"):
            return np.exp(-(sq + cross) / (4.0 * zeta) - 0.25 * zeta * (sq - cross))

    pref = ((1.0 - zeta * zeta) / (2.0 * zeta)) ** (alpha.d + alpha.total)
    return pref * pi_alpha_integrate(alpha, integrand, order)


def modified_heat_kernel(alpha, j: int, t: float, x, y) -> float:
    """Kernel of the modified semigroup: e^(-2t) x_j y_j G_t^(alpha+e_j)(x, y)."""
    alpha = as_alpha(alpha)
    x = np.asarray(x, dtype=float).reshape(alpha.d)
    y = np.asarray(y, dtype=float).reshape(alpha.d)
    return (
        math.exp(-2.0 * t)
        * x[j - 1]
        * y[j - 1]
        * heat_kernel_closed(alpha.shifted(j), t, x, y)
    )


@lru_cache(maxsize=16)
def subordination_u_rule(order: int = 20, levels: int = 24, vmax: float = 14.0):
    """Quadrature (u_q, w_q) for (1/sqrt(pi)) int e^-u u^(-1/2) f(u) du.

    Substituting u = v^2 removes the endpoint singularity and turns the
    subordination factors exp(-c/u) into C-infinity functions of v; dyadically
    graded Legendre panels then converge to machine precision.  A generalized
    Gauss-Laguerre rule in u stalls near 1e-2 relative error on exactly the
    slowly-decaying modes the identity tests exercise.
    """
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = [0.5**m for m in range(levels, -1, -1)]
    hi = 1.0
    while hi < vmax:
        edges.append(min(2.0 * hi, vmax))
        hi *= 2.0
    vs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        vs.append(0.5 * (b - a) * xg + 0.5 * (a + b))
        ws.append(0.5 * (b - a) * wg)
    v = np.concatenate(vs)
    w = np.concatenate(ws)
    return v * v, 2.0 * np.exp(-v * v) * w / math.sqrt(math.pi)


def poisson_kernel(alpha, t: float, x, y, j: int | None = None, u_order: int = 20) -> float:
    """Poisson kernel (or its modified variant for coordinate j) by subordination."""
    alpha = as_alpha(alpha)
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    base = alpha if j is None else alpha.shifted(j)
    x = _pair_array(x, alpha.d)
    y = _pair_array(y, alpha.d)
    u, w = subordination_u_rule(u_order)
    tau = t * t / (4.0 * u)
    vals = _heat_values_at_times(base, tau, x, y)
    if j is not None:
        vals = vals * np.exp(-2.0 * tau) * x[0, j - 1] * y[0, j - 1]
    return float(np.sum(w * vals))


def _fd_step(scale: float) -> float:
    return 1e-5 * max(scale, 0.1)


def kernel_entry_fd(alpha, kind: KernelKind, x, y, grid: ZetaGrid | None = None,
                    u_order: int = 20) -> TimeProfile:
    """Finite-difference realization of kernel_entry; a test oracle only.

    Time derivatives are central differences of the undifferentiated kernel;
    space derivatives difference in the relevant coordinate and add the
    zeroth-order terms of delta_i or delta_j^*.
    """
    alpha = as_alpha(alpha)
    grid = grid or ZetaGrid()
    x = np.asarray(x, dtype=float).reshape(alpha.d)
    y = np.asarray(y, dtype=float).reshape(alpha.d)
    if np.all(x == y):
        raise SingularPairError("kernel entries are undefined on the diagonal x = y")
    tag = kind.tag
    j = kind.j if kind.j else None

    def base(t, xx):
        if tag in ("dT", "hT"):
            return heat_kernel_closed(alpha, t, xx, y)
        if tag in ("dTmod", "hTmod", "hTmodStar"):
            return modified_heat_kernel(alpha, j, t, xx, y)
        if tag in ("dP", "hP"):
            return poisson_kernel(alpha, t, xx, y, u_order=u_order)
        return poisson_kernel(alpha, t, xx, y, j=j, u_order=u_order)

    vals = np.empty(grid.n)
    for q, t in enumerate(grid.t):
        if tag in ("dT", "dP", "dTmod", "dPmod"):
            h = min(_fd_step(t), 0.5 * t)
            vals[q] = (base(t + h, x) - base(t - h, x)) / (2.0 * h)
        else:
            c = kind.i if tag in ("hT", "hP", "hTmod", "hPmod") else kind.j
            h = min(_fd_step(x[c - 1]), 0.5 * x[c - 1])
            xp = x.copy()
            xm = x.copy()
            xp[c - 1] += h
            xm[c - 1] -= h
            diff = (base(t, xp) - base(t, xm)) / (2.0 * h)
            if tag in ("hT", "hP", "hTmod", "hPmod"):
                vals[q] = diff + x[c - 1] * base(t, x)
            else:
                aj = alpha.components[c - 1]
                vals[q] = -diff + (x[c - 1] - (2.0 * aj + 1.0) / x[c - 1]) * base(t, x)
    return TimeProfile(
        measure_kind=kind.measure_kind,
        zeta_nodes=grid.zeta,
        values=vals,
        weights=grid.time_weights(kind.measure_kind),
    )
