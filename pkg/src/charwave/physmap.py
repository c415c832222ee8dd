"""Recovery of physical coordinates and extraction of time slices.

The closed differentials of the physical coordinates,

    x_X = (1+cos w) p / 4        x_Y = -(1+cos z) q / 4
    t_X = (1+cos w) p / (4c)     t_Y =  (1+cos z) q / (4c)

are integrated from the boundary curve, where t = 0 and x equals the curve
parameter.  Each node averages the estimates arriving from its south and
west anchors, so the result is the mean over all staircase paths; the
largest south/west disagreement doubles as a solver diagnostic.

A time slice is the level curve t(X, Y) = tau.  t is nondecreasing along
both lattice directions, so the level set crosses each lattice edge at most
once; crossings are found by sign change and all fields are interpolated
linearly onto the crossing point.  Samples where 1+cos w or 1+cos z falls
under a small threshold are flagged singular: there tan(w/2), tan(z/2)
overflow, which is the bounded-variables signature of gradient blow-up.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charsolver import CharGrid, build_lattice
from .initdata import BoundaryCurve

__all__ = [
    "TimeSlice",
    "CompatibilityError",
    "attach_coords",
    "compatibility_residual",
    "extract_time_slice",
    "resample_uniform",
    "riemann_variables",
    "jacobian",
    "coordinate_slopes",
    "SINGULAR_EPS",
]

SINGULAR_EPS = 1e-8


class CompatibilityError(RuntimeError):
    """South and west path integrals disagree beyond the allowed residual."""


def coordinate_slopes(g: CharGrid):
    """Arrays (x_X, x_Y, t_X, t_Y) evaluated from the grid fields."""
    c = g.ws.c(g.v)
    a = (1.0 + np.cos(g.w)) * g.p / 4.0
    b = (1.0 + np.cos(g.z)) * g.q / 4.0
    return a, -b, a / c, b / c


def attach_coords(g: CharGrid, bc: BoundaryCurve) -> CharGrid:
    """Fill g.t and g.x by integrating the coordinate differentials from the
    boundary curve; raises CompatibilityError when the two incoming path
    estimates disagree by more than 1e3*(dX^2+dY^2).
    """
    lat = build_lattice(bc, (g.X0, g.Xs[-1], g.Y0, g.Ys[-1]), g.dX, g.dY, g.ws)
    xX, xY, tX, tY = coordinate_slopes(g)

    cw = np.cos(lat.col.w)
    cz = np.cos(lat.col.z)
    cc = g.ws.c(lat.col.v)
    col_xY = -(1.0 + cz) / 4.0          # p = q = 1 on the curve
    col_tY = (1.0 + cz) / (4.0 * cc)
    rw = np.cos(lat.row.w)
    rc = g.ws.c(lat.row.v)
    row_xX = (1.0 + rw) / 4.0
    row_tX = (1.0 + rw) / (4.0 * rc)

    t = np.full_like(g.w, np.nan)
    x = np.full_like(g.w, np.nan)
    worst = 0.0

    for ii, jj in lat.fronts:
        (t_s, x_s, tY_s, xY_s), hY = _gather_s(lat, (t, x, tY, xY),
                                               (None, lat.col.x, col_tY, col_xY), ii, jj)
        (t_w, x_w, tX_w, xX_w), hX = _gather_w(lat, (t, x, tX, xX),
                                               (None, lat.row.x, row_tX, row_xX), ii, jj)
        tYc, xYc = tY[ii, jj], xY[ii, jj]
        tXc, xXc = tX[ii, jj], xX[ii, jj]

        t_from_s = t_s + 0.5 * hY * (tY_s + tYc)
        t_from_w = t_w + 0.5 * hX * (tX_w + tXc)
        x_from_s = x_s + 0.5 * hY * (xY_s + xYc)
        x_from_w = x_w + 0.5 * hX * (xX_w + xXc)

        disc = max(float(np.max(np.abs(t_from_s - t_from_w))),
                   float(np.max(np.abs(x_from_s - x_from_w))))
        worst = max(worst, disc)
        t[ii, jj] = 0.5 * (t_from_s + t_from_w)
        x[ii, jj] = 0.5 * (x_from_s + x_from_w)

    limit = 1e3 * (g.dX ** 2 + g.dY ** 2)
    if worst > limit:
        raise CompatibilityError(
            f"compatibility violation: path disagreement {worst:.3e} exceeds {limit:.3e}")

    g.t, g.x = t, x
    return g


def _gather_s(lat, arrs_grid, arrs_foot, ii, jj):
    south = jj > lat.j_foot[ii]
    jm = np.maximum(jj - 1, 0)
    vals = []
    for garr, farr in zip(arrs_grid, arrs_foot):
        fv = 0.0 if farr is None else farr[ii]
        vals.append(np.where(south, garr[ii, jm], fv))
    hY = np.where(south, lat.Ys[1] - lat.Ys[0], lat.col.h[ii])
    return vals, hY


def _gather_w(lat, arrs_grid, arrs_foot, ii, jj):
    west = ii > lat.i_foot[jj]
    im = np.maximum(ii - 1, 0)
    vals = []
    for garr, farr in zip(arrs_grid, arrs_foot):
        fv = 0.0 if farr is None else farr[jj]
        vals.append(np.where(west, garr[im, jj], fv))
    hX = np.where(west, lat.Xs[1] - lat.Xs[0], lat.row.h[jj])
    return vals, hX


def compatibility_residual(g: CharGrid) -> tuple[float, float]:
    """Max over interior masked nodes of |d_Y(x_X) - d_X(x_Y)| and the t
    analogue, by centered differences of the coordinate slopes."""
    xX, xY, tX, tY = coordinate_slopes(g)
    m = g.mask
    interior = m.copy()
    interior[0, :] = interior[-1, :] = False
    interior[:, 0] = interior[:, -1] = False
    interior[1:-1, 1:-1] &= (m[1:-1, 2:] & m[1:-1, :-2] & m[2:, 1:-1] & m[:-2, 1:-1])

    def curl(FX, FY):
        r = np.full_like(FX, np.nan)
        r[1:-1, 1:-1] = ((FX[1:-1, 2:] - FX[1:-1, :-2]) / (2 * g.dY)
                         - (FY[2:, 1:-1] - FY[:-2, 1:-1]) / (2 * g.dX))
        vals = np.abs(r[interior])
        return float(np.max(vals)) if vals.size else 0.0

    return curl(xX, xY), curl(tX, tY)


@dataclass
class TimeSlice:
    """Samples of the solution along the level curve t = tau, ordered by x.

    vt and vx are reconstructed from the angle variables (R = tan(w/2),
    S = tan(z/2)) and set to NaN at singular samples.  The characteristic
    coordinates and raw fields of each sample are kept because the energy
    measures are line integrals along this curve.
    """

    tau: float
    x: np.ndarray
    v: np.ndarray
    vt: np.ndarray
    vx: np.ndarray
    singular: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    w: np.ndarray
    z: np.ndarray
    p: np.ndarray
    q: np.ndarray

    def __len__(self):
        return self.x.size


def _edge_crossings(t, mask, tau, axis):
    """Interpolation weights for edges along ``axis`` where t crosses tau."""
    if axis == 1:
        t1, t2 = t[:, :-1], t[:, 1:]
        ok = mask[:, :-1] & mask[:, 1:]
    else:
        t1, t2 = t[:-1, :], t[1:, :]
        ok = mask[:-1, :] & mask[1:, :]
    ok &= np.isfinite(t1) & np.isfinite(t2)
    hit = ok & (t1 <= tau) & (t2 > tau)
    idx = np.nonzero(hit)
    lam = (tau - t1[idx]) / (t2[idx] - t1[idx])
    return idx, lam


def extract_time_slice(g: CharGrid, tau: float) -> TimeSlice:
    """Extract the level curve t(X, Y) = tau with all fields interpolated
    onto the crossings, ordered (strictly) by x."""
    if not g.coords_attached:
        raise ValueError("attach_coords must run before slice extraction")
    tmask = g.t[g.mask]
    tmin, tmax = float(np.nanmin(tmask)), float(np.nanmax(tmask))
    if not (tmin <= tau <= tmax):
        raise ValueError(f"tau={tau} outside recovered range [{tmin:.6g}, {tmax:.6g}]")

    fields = (g.x, g.v, g.w, g.z, g.p, g.q)
    Xg = np.broadcast_to(g.Xs[:, None], g.t.shape)
    Yg = np.broadcast_to(g.Ys[None, :], g.t.shape)

    cols = []
    for axis in (1, 0):
        idx, lam = _edge_crossings(g.t, g.mask, tau, axis)
        if idx[0].size == 0:
            continue
        if axis == 1:
            nxt = (idx[0], idx[1] + 1)
        else:
            nxt = (idx[0] + 1, idx[1])
        samp = [(1 - lam) * f[idx] + lam * f[nxt] for f in fields]
        sampX = (1 - lam) * Xg[idx] + lam * Xg[nxt]
        sampY = (1 - lam) * Yg[idx] + lam * Yg[nxt]
        cols.append((samp, sampX, sampY))
    if not cols:
        raise ValueError(f"empty level set for tau={tau}")

    x = np.concatenate([c[0][0] for c in cols])
    v = np.concatenate([c[0][1] for c in cols])
    w = np.concatenate([c[0][2] for c in cols])
    z = np.concatenate([c[0][3] for c in cols])
    p = np.concatenate([c[0][4] for c in cols])
    q = np.concatenate([c[0][5] for c in cols])
    X = np.concatenate([c[1] for c in cols])
    Y = np.concatenate([c[2] for c in cols])

    order = np.argsort(x, kind="stable")
    x, v, w, z, p, q, X, Y = (a[order] for a in (x, v, w, z, p, q, X, Y))

    # non-injective fibers can duplicate x; keep the first crossing
    keep = np.ones(x.size, dtype=bool)
    keep[1:] = np.diff(x) > 1e-13 * (1.0 + np.abs(x[1:]))
    x, v, w, z, p, q, X, Y = (a[keep] for a in (x, v, w, z, p, q, X, Y))

    one_cw = 1.0 + np.cos(w)
    one_cz = 1.0 + np.cos(z)
    singular = np.minimum(one_cw, one_cz) < SINGULAR_EPS
    with np.errstate(divide="ignore", invalid="ignore"):
        R = np.sin(w) / one_cw
        S = np.sin(z) / one_cz
    c = g.ws.c(v)
    vt = np.where(singular, np.nan, 0.5 * (R + S))
    vx = np.where(singular, np.nan, (R - S) / (2.0 * c))

    return TimeSlice(tau=float(tau), x=x, v=v, vt=vt, vx=vx,
                     singular=singular, X=X, Y=Y, w=w, z=z, p=p, q=q)


def riemann_variables(s: TimeSlice):
    """R and S along the slice; NaN at singular samples."""
    with np.errstate(divide="ignore", invalid="ignore"):
        R = np.where(s.singular, np.nan, np.tan(0.5 * s.w))
        S = np.where(s.singular, np.nan, np.tan(0.5 * s.z))
    return R, S


def resample_uniform(s: TimeSlice, x_grid: np.ndarray) -> dict:
    """Linear interpolation of the slice onto x_grid.

    v is interpolated everywhere; vt and vx only between two non-singular
    neighbours, NaN otherwise.
    """
    x_grid = np.asarray(x_grid, dtype=float)
    if x_grid.size and (x_grid[0] < s.x[0] - 1e-12 or x_grid[-1] > s.x[-1] + 1e-12):
        raise ValueError("x_grid extends beyond the slice range")
    v = np.interp(x_grid, s.x, s.v)

    pos = np.clip(np.searchsorted(s.x, x_grid, side="right") - 1, 0, s.x.size - 2)
    valid = ~s.singular[pos] & ~s.singular[pos + 1]
    vt = np.where(valid, np.interp(x_grid, s.x, np.nan_to_num(s.vt)), np.nan)
    vx = np.where(valid, np.interp(x_grid, s.x, np.nan_to_num(s.vx)), np.nan)
    return {"x": x_grid, "v": v, "vt": vt, "vx": vx}


def jacobian(g: CharGrid) -> np.ndarray:
    """dx dt / dX dY = p q (1+cos w)(1+cos z) / (8c); nonnegative, zero only
    on the singular set."""
    c = g.ws.c(g.v)
    return g.p * g.q * (1.0 + np.cos(g.w)) * (1.0 + np.cos(g.z)) / (8.0 * c)
