"""The ten vertical and horizontal square functions on finite expansions.

Applied to a finite expansion, every square function has a time integrand that
is a finite exponential sum  sum_m a_m(x) e^(-nu_m t)  (heat kinds decay with
the eigenvalue, Poisson kinds with its square root), so the squared time norm
is a closed double sum:

    ||.||^2 over t dt :  sum_(m,m') a_m a_m' / (nu_m + nu_m')^2
    ||.||^2 over dt   :  sum_(m,m') a_m a_m' / (nu_m + nu_m')

The amplitudes a_m(x) come from one extraction table: each kind contributes a
per-mode multiplier (an eigenvalue factor for vertical kinds, a ladder factor
-2 sqrt(k_i) for horizontal ones) and an output basis family.  The same table
drives the ζ-grid quadrature route used for cross-checking.
"""

from dataclasses import dataclass

import numpy as np

from .basis import Expansion, PLAIN, differentiated, eigenvalue, ell
from .kernels import TimeProfile, ZetaGrid, bnorm
from .measure import as_alpha

__all__ = [
    "GFunctionKind",
    "GFUNCTION_TAGS",
    "gfun_exact",
    "gfun_quadrature",
    "gfun_profile",
    "gfun_l2_norm",
    "gfun_l2_exact",
]

GFUNCTION_TAGS = (
    "gVT",
    "gHT",
    "gVTmod",
    "gHTmod",
    "gHTmodStar",
    "gVP",
    "gHP",
    "gVPmod",
    "gHPmod",
    "gHPmodStar",
)

_NEEDS_I = {"gHT", "gHP", "gHTmod", "gHPmod"}
_NEEDS_J = {"gVTmod", "gHTmod", "gHTmodStar", "gVPmod", "gHPmod", "gHPmodStar"}
_DT_MEASURE = {"gHT", "gHTmod", "gHTmodStar"}
_POISSON = {"gVP", "gHP", "gVPmod", "gHPmod", "gHPmodStar"}


@dataclass(frozen=True)
class GFunctionKind:
    """Square-function tag with derivative coordinate i and family coordinate j."""

    tag: str
    i: int = 0
    j: int = 0

    def __post_init__(self):
        if self.tag not in GFUNCTION_TAGS:
            raise ValueError(f"unknown g-function tag {self.tag!r}")
        if self.tag in _NEEDS_I and self.i < 1:
            raise ValueError(f"{self.tag} needs a derivative coordinate i")
        if self.tag in _NEEDS_J and self.j < 1:
            raise ValueError(f"{self.tag} needs a semigroup coordinate j")
        if self.tag in ("gHTmod", "gHPmod") and self.i == self.j:
            raise ValueError(f"{self.tag} requires i != j (i = j is the Star kind)")

    @property
    def measure_kind(self) -> str:
        return "dt" if self.tag in _DT_MEASURE else "t_dt"

    @property
    def is_poisson(self) -> bool:
        return self.tag in _POISSON

    def input_family(self):
        return PLAIN if self.tag in ("gVT", "gHT", "gVP", "gHP") else differentiated(self.j)


def _check_input(kind: GFunctionKind, e: Expansion):
    want = kind.input_family()
    if e.family != want:
        raise ValueError(
            f"{kind.tag} expects the {want.kind} family"
            + (f" (j={want.j})" if not want.is_plain else "")
        )


def _shift_down(k: tuple, coords) -> tuple:
    out = list(k)
    for c in coords:
        out[c - 1] -= 1
    return tuple(out)


def _modes(kind: GFunctionKind, e: Expansion):
    """Per-mode decay rates, multipliers and output-basis specs for the kind."""
    alpha = e.alpha
    nus, mults, outs = [], [], []
    for k, c in e.coeffs.items():
        lam = eigenvalue(alpha, sum(k))
        nu = np.sqrt(lam) if kind.is_poisson else lam
        if kind.tag in ("gVT", "gVP", "gVTmod", "gVPmod"):
            mult = -nu
            out = ("same", k)
        elif kind.tag in ("gHT", "gHP"):
            if k[kind.i - 1] == 0:
                continue
            mult = -2.0 * np.sqrt(k[kind.i - 1])
            out = ("diff", (kind.i,), k)
        elif kind.tag in ("gHTmod", "gHPmod"):
            if k[kind.i - 1] == 0:
                continue
            mult = -2.0 * np.sqrt(k[kind.i - 1])
            out = ("diff", (kind.i, kind.j), k)
        else:  # gHTmodStar / gHPmodStar
            mult = -2.0 * np.sqrt(k[kind.j - 1])
            out = ("plain", k)
        nus.append(nu)
        mults.append(mult * c)
        outs.append(out)
    return np.asarray(nus), np.asarray(mults), outs


def _out_value(alpha, family_in, out, pts: np.ndarray) -> np.ndarray:
    """Value of the output basis member described by an out spec, at pts (n, d)."""
    tag = out[0]
    if tag == "plain":
        return ell(alpha, out[1], pts)
    if tag == "same":
        k = out[1]
        if family_in.is_plain:
            return ell(alpha, k, pts)
        j = family_in.j
        return pts[:, j - 1] * ell(alpha.shifted(j), _shift_down(k, (j,)), pts)
    # differentiated in the given coordinates (on top of the input family shift)
    coords, k = out[1], out[2]
    shifted = alpha
    prefactor = np.ones(pts.shape[0])
    for c in coords:
        shifted = shifted.shifted(c)
        prefactor = prefactor * pts[:, c - 1]
    return prefactor * ell(shifted, _shift_down(k, coords), pts)


def _amplitudes(kind: GFunctionKind, e: Expansion, pts: np.ndarray):
    """Amplitude matrix (nmodes, npts) and decay rates (nmodes,)."""
    nus, mults, outs = _modes(kind, e)
    amp = np.empty((len(nus), pts.shape[0]))
    for m, out in enumerate(outs):
        amp[m] = mults[m] * _out_value(e.alpha, e.family, out, pts)
    return nus, amp


def _as_points(e: Expansion, x):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    single = x.ndim == 1 and x.shape == (e.d,)
    if x.ndim == 1 and e.d == 1 and x.shape != (1,):
        return x[:, None], False
    return (x[None, :] if single else x), single


def gfun_exact(kind: GFunctionKind, e: Expansion, x):
    """Pointwise value of the square function, by the closed double sum."""
    _check_input(kind, e)
    pts, single = _as_points(e, x)
    if not e.coeffs:
        return 0.0 if single else np.zeros(pts.shape[0])
    nus, amp = _amplitudes(kind, e, pts)
    power = 1 if kind.measure_kind == "dt" else 2
    denom = (nus[:, None] + nus[None, :]) ** power
    sq = np.einsum("mp,mn,np->p", amp, 1.0 / denom, amp)
    out = np.sqrt(np.maximum(sq, 0.0))
    return float(out[0]) if single else out


def gfun_quadrature(kind: GFunctionKind, e: Expansion, x, grid: ZetaGrid | None = None):
    """Same value through the ζ-grid time quadrature; cross-check route."""
    _check_input(kind, e)
    grid = grid or ZetaGrid()
    pts, single = _as_points(e, x)
    w = grid.time_weights(kind.measure_kind)
    if not e.coeffs:
        return 0.0 if single else np.zeros(pts.shape[0])
    nus, amp = _amplitudes(kind, e, pts)
    decay = np.exp(-np.outer(nus, grid.t))
    integrand = amp.T @ decay  # (npts, T)
    out = np.sqrt(np.maximum(integrand**2 @ w, 0.0))
    return float(out[0]) if single else out


def gfun_profile(kind: GFunctionKind, e: Expansion, x, grid: ZetaGrid | None = None) -> TimeProfile:
    """The time integrand at one point x, as a TimeProfile."""
    _check_input(kind, e)
    grid = grid or ZetaGrid()
    pts, _ = _as_points(e, x)
    nus, amp = _amplitudes(kind, e, pts[:1])
    decay = np.exp(-np.outer(nus, grid.t))
    vals = (amp.T @ decay)[0]
    return TimeProfile(kind.measure_kind, grid.zeta, vals, grid.time_weights(kind.measure_kind))


def gfun_l2_norm(kind: GFunctionKind, e: Expansion, order: int = 64) -> float:
    """||g(f)||_{L^2(d mu_alpha)} by Gauss-Laguerre quadrature of gfun_exact^2."""
    from .basis import _quad_grid

    _check_input(kind, e)
    pts, w = _quad_grid(e.alpha, order)
    vals = gfun_exact(kind, e, pts)
    return float(np.sqrt(np.sum(w * vals**2)))


def gfun_l2_exact(kind: GFunctionKind, e: Expansion) -> float:
    """The same norm from orthonormality of the output system (spectral form)."""
    _check_input(kind, e)
    if not e.coeffs:
        return 0.0
    nus, mults, _ = _modes(kind, e)
    if kind.measure_kind == "dt":
        weights = 1.0 / (2.0 * nus)
    else:
        weights = 1.0 / (4.0 * nus * nus)
    return float(np.sqrt(np.sum(mults**2 * weights)))
