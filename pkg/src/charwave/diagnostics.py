"""Conserved quantities, energy measures, and bound checks.

Everything here is a read-only functional of a solved grid, a time slice, or
finite-difference snapshots:

* physical energy by slice quadrature, and the same quantity as the line
  integral of the closed energy 1-form along the level curve (the latter
  stays exact through gradient blow-up, where slice quadrature loses the
  concentrated part);
* discrete curls of the two closed 1-forms (energy and momentum);
* the energy measures mu^-/mu^+ on intervals, whose total equals the ground
  energy at every time;
* the wave interaction potential and a computable bound on its growth rate;
* L2-Lipschitz and Hoelder-1/2 continuity checks for t -> v(t, .);
* the weak-form residual against smooth compactly supported test functions.

Note the momentum flux: the conserved pairing is (M, E - u) with
u = v^2/2 + v^4/4, i.e. M_t + (E - u)_x = 0.  The corresponding closed
1-form in the characteristic plane carries the potential term with a minus
sign relative to the energy form.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from .charsolver import CharGrid
from .physmap import (TimeSlice, extract_time_slice, resample_uniform,
                      riemann_variables)
from .wavespeed import SpeedBounds, WaveSpeed

__all__ = [
    "EnergyReport",
    "MeasureTable",
    "MeasureRow",
    "TestBump",
    "energy_density",
    "energy_physical",
    "energy_forms",
    "closedness_residual",
    "balance_divergence_residual",
    "measures",
    "slice_measure_parts",
    "interaction_potential",
    "lambda_slope_bound",
    "lipschitz_bound",
    "lipschitz_check",
    "holder_check",
    "weak_residual",
    "weak_residual_physical",
    "balance_residuals",
]


def energy_density(vt, vx, v, c):
    """(1/2)(v_t^2 + c^2 v_x^2 + v^2/2 + v^4/4)."""
    return 0.5 * (vt ** 2 + (c * vx) ** 2 + 0.5 * v ** 2 + 0.25 * v ** 4)


# Samples this close to the degenerate angles are kept out of physical-space
# quadratures: tan(w/2)^2 there is resolution-limited and a trapezoid over
# such a spike can badly over- or undershoot.  The energy they carry belongs
# to the concentrated (singular) part that a grid cannot see anyway.
QUADRATURE_GUARD = 1e-4


def quadrature_ok(s: TimeSlice, guard: float = QUADRATURE_GUARD) -> np.ndarray:
    """Samples usable for physical-space quadrature of R^2/S^2 densities."""
    return np.minimum(1.0 + np.cos(s.w), 1.0 + np.cos(s.z)) >= guard


def energy_physical(s: TimeSlice, ws: WaveSpeed, guard: float = QUADRATURE_GUARD) -> float:
    """Trapezoid quadrature of the energy density over the slice.

    Segments touching a singular or near-singular sample (see
    ``quadrature_ok``) are excluded; if more than 5% of the samples are
    excluded a warning is issued because the quadrature then misses a
    non-negligible concentrated part.
    """
    good = quadrature_ok(s, guard) & ~s.singular
    frac = 1.0 - float(np.mean(good)) if len(s) else 0.0
    if frac > 0.05:
        warnings.warn(f"{100 * frac:.1f}% of slice samples singular or near-singular; "
                      "energy quadrature unreliable", RuntimeWarning)
    with np.errstate(invalid="ignore"):
        dens = energy_density(s.vt, s.vx, s.v, ws.c(s.v))
    seg_ok = good[:-1] & good[1:]
    dx = np.diff(s.x)
    avg = 0.5 * (np.nan_to_num(dens[:-1]) + np.nan_to_num(dens[1:]))
    return float(np.sum(np.where(seg_ok, avg * dx, 0.0)))


def _form_coefficients(w, z, p, q, v, c=None, momentum=False):
    """Coefficients (F, G) of the closed 1-form F dX + G dY.

    Energy:    F = [(1-cos w)/8 + (1+cos w)(2v^2+v^4)/32] p
               G = -[(1-cos z)/8 + (1+cos z)(2v^2+v^4)/32] q
    Momentum:  F = [(1-cos w)/(8c) - (1+cos w)(2v^2+v^4)/(32c)] p
               G = [(1-cos z)/(8c) - (1+cos z)(2v^2+v^4)/(32c)] q
    """
    pot = 2.0 * v ** 2 + v ** 4
    if momentum:
        F = ((1.0 - np.cos(w)) / (8.0 * c) - (1.0 + np.cos(w)) * pot / (32.0 * c)) * p
        G = ((1.0 - np.cos(z)) / (8.0 * c) - (1.0 + np.cos(z)) * pot / (32.0 * c)) * q
    else:
        F = ((1.0 - np.cos(w)) / 8.0 + (1.0 + np.cos(w)) * pot / 32.0) * p
        G = -((1.0 - np.cos(z)) / 8.0 + (1.0 + np.cos(z)) * pot / 32.0) * q
    return F, G


def _line_integral(s: TimeSlice, lo: float | None = None, hi: float | None = None):
    """Integrals of the two energy 1-form pieces along the slice polyline.

    Returns (mu_minus, mu_plus) = (int F dX, int G dY); G is negative and dY
    decreases along the curve, so both pieces are nonnegative and their sum
    is the line integral of the energy form.  Partial end segments are
    interpolated when (lo, hi) cut between samples.  The coefficients are
    bounded through singular points, so no exclusion is needed here.
    """
    x, X, Y = s.x, s.X, s.Y
    F, G = _form_coefficients(s.w, s.z, s.p, s.q, s.v)
    if lo is not None or hi is not None:
        lo = x[0] if lo is None else max(lo, x[0])
        hi = x[-1] if hi is None else min(hi, x[-1])
        if hi <= lo:
            return 0.0, 0.0
        xs = np.concatenate([[lo], x[(x > lo) & (x < hi)], [hi]])
        F = np.interp(xs, x, F)
        G = np.interp(xs, x, G)
        X = np.interp(xs, x, X)
        Y = np.interp(xs, x, Y)
    dX = np.diff(X)
    dY = np.diff(Y)
    mu_minus = float(np.sum(0.5 * (F[:-1] + F[1:]) * dX))
    mu_plus = float(np.sum(0.5 * (G[:-1] + G[1:]) * dY))
    return mu_minus, mu_plus


def energy_forms(g: CharGrid, tau: float, slice_: TimeSlice | None = None) -> float:
    """Energy at time tau as the line integral of the closed 1-form along
    the level curve; path independence makes this tau-invariant up to
    discretization."""
    s = slice_ if slice_ is not None else extract_time_slice(g, tau)
    mu_minus, mu_plus = _line_integral(s)
    return mu_minus + mu_plus


def closedness_residual(g: CharGrid) -> tuple[float, float]:
    """Max over interior masked cells of the discrete curl d_Y F - d_X G for
    the energy and momentum 1-forms (centered differences)."""
    c = g.ws.c(g.v)
    FE, GE = _form_coefficients(g.w, g.z, g.p, g.q, g.v)
    FM, GM = _form_coefficients(g.w, g.z, g.p, g.q, g.v, c=c, momentum=True)

    m = g.mask
    interior = np.zeros_like(m)
    interior[1:-1, 1:-1] = (m[1:-1, 1:-1] & m[1:-1, 2:] & m[1:-1, :-2]
                            & m[2:, 1:-1] & m[:-2, 1:-1])

    def curl(F, G):
        r = np.full_like(F, np.nan)
        r[1:-1, 1:-1] = ((F[1:-1, 2:] - F[1:-1, :-2]) / (2 * g.dY)
                         - (G[2:, 1:-1] - G[:-2, 1:-1]) / (2 * g.dX))
        vals = np.abs(r[interior])
        return float(np.max(vals)) if vals.size else 0.0

    return curl(FE, GE), curl(FM, GM)


def balance_divergence_residual(g: CharGrid) -> float:
    """Cell residual of the conservation form of the p/q balance,

        [q (1 + u(1+cos z)/2)]_X + [p (1 + u(1+cos w)/2)]_Y = 0,
        u = v^2/2 + v^4/4,

    i.e. the flux-form divergence over each lattice cell (the discrete
    Green's-theorem statement, whose corollary is the two-leg integral bound
    on p and q).  Vanishes under refinement on exact solutions."""
    u = 0.5 * g.v ** 2 + 0.25 * g.v ** 4
    F1 = g.q * (1.0 + 0.5 * u * (1.0 + np.cos(g.z)))
    F2 = g.p * (1.0 + 0.5 * u * (1.0 + np.cos(g.w)))
    m = g.mask
    cell = m[:-1, :-1] & m[1:, :-1] & m[:-1, 1:] & m[1:, 1:]
    divX = (F1[1:, :-1] + F1[1:, 1:] - F1[:-1, :-1] - F1[:-1, 1:]) / (2 * g.dX)
    divY = (F2[:-1, 1:] + F2[1:, 1:] - F2[:-1, :-1] - F2[1:, :-1]) / (2 * g.dY)
    vals = np.abs(divX + divY)[cell]
    return float(np.max(vals)) if vals.size else 0.0


@dataclass
class MeasureRow:
    a: float
    b: float
    mu_minus: float
    mu_plus: float
    empty: bool = False


@dataclass
class MeasureTable:
    """Energy measures of intervals at a fixed time, plus the total mass."""

    tau: float
    rows: list
    total: float


def measures(g: CharGrid, tau: float, intervals,
             slice_: TimeSlice | None = None) -> MeasureTable:
    """mu^-, mu^+ of each open interval ]a, b[ at time tau, as 1-form line
    integrals between the curve points with x = a and x = b.  Intervals
    outside the slice's x-range come back flagged empty."""
    s = slice_ if slice_ is not None else extract_time_slice(g, tau)
    rows = []
    for a, b in intervals:
        if b <= s.x[0] or a >= s.x[-1]:
            rows.append(MeasureRow(a=float(a), b=float(b), mu_minus=float("nan"),
                                   mu_plus=float("nan"), empty=True))
            continue
        mm, mp = _line_integral(s, float(a), float(b))
        rows.append(MeasureRow(a=float(a), b=float(b), mu_minus=mm, mu_plus=mp))
    total = sum(_line_integral(s))
    return MeasureTable(tau=float(tau), rows=rows, total=float(total))


def slice_measure_parts(s: TimeSlice, ws: WaveSpeed, a: float, b: float):
    """Independent physical-space reconstruction of the measure densities on
    ]a, b[ for the smooth case.

    Returns (wave_minus, wave_plus, potential_half): the R^2/4 and S^2/4
    quadratures plus the shared potential contribution (2v^2+v^4)/16 that
    each of mu^- and mu^+ carries.  Singular segments are excluded.
    """
    R, S = riemann_variables(s)
    good = quadrature_ok(s) & ~s.singular
    inside = (s.x >= a) & (s.x <= b)
    seg = good[:-1] & good[1:] & inside[:-1] & inside[1:]
    dx = np.diff(s.x)

    def integ(dens):
        avg = 0.5 * (dens[:-1] + dens[1:])
        return float(np.sum(np.where(seg, avg * dx, 0.0)))

    wave_minus = integ(np.where(good, R, 0.0) ** 2 / 4.0)
    wave_plus = integ(np.where(good, S, 0.0) ** 2 / 4.0)
    pot_half = integ((2.0 * s.v ** 2 + s.v ** 4) / 16.0)
    return wave_minus, wave_plus, pot_half


def interaction_potential(s: TimeSlice, ws: WaveSpeed) -> float:
    """Lambda = (1/4) iint_{x>y} R^2(x) S^2(y) dx dy via the separable form
    (1/4) int R^2(x) CumS2(x) dx; singular and near-singular samples are
    dropped (their resolution-limited spikes belong to the concentrated
    part)."""
    R, S = riemann_variables(s)
    good = quadrature_ok(s) & ~s.singular
    if np.count_nonzero(good) < 2:
        return 0.0
    x = s.x[good]
    R2 = R[good] ** 2
    S2 = S[good] ** 2
    cum = cumulative_trapezoid(S2, x, initial=0.0)
    return 0.25 * float(trapezoid(R2 * cum, x))


def lambda_slope_bound(e0: float, ws: WaveSpeed, v_max: float) -> float:
    """Computable upper bound for (Lambda(t) - Lambda(s))/(t - s).

    Follows the absorption argument for d(4 Lambda)/dt: the transport term
    contributes -2/kappa * int R^2 S^2, the c'-coupling is split with
    eps = (1/(8 kappa e0 m))^2, m = sup|c'/2c|, and the (v+v^3) terms are
    bounded through the energy.  Constant speed gives 8 e0^2 (1+v_max^2).
    """
    kappa = ws.bounds().kappa
    m = ws.log_derivative_sup()
    cross = 32.0 * e0 ** 2 * (1.0 + v_max ** 2)
    if m == 0.0:
        return cross / 4.0
    return (256.0 * e0 ** 3 * m * m * kappa + cross) / 4.0


def lipschitz_bound(e0: float, bounds: SpeedBounds) -> float:
    """L = sqrt(4 (kappa^3 + 1) e0), the L2 Lipschitz constant of t -> v."""
    return float(np.sqrt(4.0 * (bounds.kappa ** 3 + 1.0) * e0))


@dataclass
class LipschitzReport:
    max_ratio: float
    bound: float
    slack: float
    n_pairs: int

    @property
    def passed(self) -> bool:
        return self.max_ratio <= self.bound * (1.0 + self.slack)


def lipschitz_check(slices, e0: float, bounds: SpeedBounds,
                    slack: float = 0.05, n_grid: int = 1024) -> LipschitzReport:
    """Max over slice pairs of ||v(t)-v(s)||_L2 / |t-s| against the bound."""
    if len(slices) < 2:
        raise ValueError("need at least two slices")
    lo = max(s.x[0] for s in slices)
    hi = min(s.x[-1] for s in slices)
    if hi <= lo:
        raise ValueError("slices do not overlap in x")
    xg = np.linspace(lo, hi, n_grid)
    vs = [resample_uniform(s, xg)["v"] for s in slices]
    taus = [s.tau for s in slices]

    worst = 0.0
    n = 0
    for i in range(len(slices)):
        for j in range(i + 1, len(slices)):
            dt = abs(taus[j] - taus[i])
            if dt < 1e-12:
                continue
            l2 = float(np.sqrt(trapezoid((vs[j] - vs[i]) ** 2, xg)))
            worst = max(worst, l2 / dt)
            n += 1
    return LipschitzReport(max_ratio=worst, bound=lipschitz_bound(e0, bounds),
                           slack=slack, n_pairs=n)


@dataclass
class HolderReport:
    coefficients: list
    window: tuple

    @property
    def stable(self) -> bool:
        cs = [c for c in self.coefficients if c > 0]
        if len(cs) < 2:
            return True
        r = [cs[k + 1] / cs[k] for k in range(len(cs) - 1)]
        return all(0.5 <= rr <= 2.0 for rr in r)


def holder_check(grids, window, n_pairs: int = 4000, seed: int = 42) -> HolderReport:
    """Empirical Hoelder-1/2 coefficient sup |v(P)-v(Q)| / d(P,Q)^(1/2) over
    random node pairs inside a bounded (t, x) window, for each refinement
    level; stability of the coefficient across levels is the checkable
    consequence of the continuity estimate."""
    t0, t1, x0, x1 = window
    coefs = []
    for g in grids:
        if not g.coords_attached:
            raise ValueError("grids must have coordinates attached")
        sel = g.mask & np.isfinite(g.t) & (g.t >= t0) & (g.t <= t1) \
            & (g.x >= x0) & (g.x <= x1)
        pts_t = g.t[sel]
        pts_x = g.x[sel]
        pts_v = g.v[sel]
        if pts_t.size < 2:
            coefs.append(0.0)
            continue
        rng = np.random.default_rng(seed)
        ia = rng.integers(0, pts_t.size, size=n_pairs)
        ib = rng.integers(0, pts_t.size, size=n_pairs)
        d = np.hypot(pts_t[ia] - pts_t[ib], pts_x[ia] - pts_x[ib])
        dv = np.abs(pts_v[ia] - pts_v[ib])
        ok = d > 1e-12
        ratio = dv[ok] / np.sqrt(d[ok])
        coefs.append(float(np.max(ratio)) if ratio.size else 0.0)
    return HolderReport(coefficients=coefs, window=tuple(window))


class TestBump:
    """Smooth compactly supported test function on a (t, x) box."""

    def __init__(self, t0: float, x0: float, rt: float, rx: float):
        self.t0, self.x0, self.rt, self.rx = float(t0), float(x0), float(rt), float(rx)

    @staticmethod
    def _w(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        out = np.zeros_like(s)
        inside = np.abs(s) < 1.0
        si = s[inside]
        out[inside] = np.exp(-si * si / (1.0 - si * si))
        return out

    @staticmethod
    def _wp(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        out = np.zeros_like(s)
        inside = np.abs(s) < 1.0
        si = s[inside]
        om = 1.0 - si * si
        out[inside] = np.exp(-si * si / om) * (-2.0 * si / (om * om))
        return out

    def value(self, t, x):
        return self._w((t - self.t0) / self.rt) * self._w((x - self.x0) / self.rx)

    def dt(self, t, x):
        return self._wp((t - self.t0) / self.rt) / self.rt * self._w((x - self.x0) / self.rx)

    def dx(self, t, x):
        return self._w((t - self.t0) / self.rt) * self._wp((x - self.x0) / self.rx) / self.rx

    def support(self):
        return (self.t0 - self.rt, self.t0 + self.rt,
                self.x0 - self.rx, self.x0 + self.rx)


def _check_support_covered(g: CharGrid, fn: TestBump):
    ta, tb, xa, xb = fn.support()
    sel = g.mask & np.isfinite(g.t)
    tcol = g.t[sel]
    xcol = g.x[sel]
    if ta < float(np.min(tcol)) - 1e-12 or tb > float(np.max(tcol)):
        raise ValueError("test support exits covered region (in t)")
    for tc in np.linspace(ta, tb, 5):
        band = np.abs(tcol - tc) <= max(2.0 * (g.dX + g.dY), 0.02 * (tb - ta))
        if not np.any(band) or float(np.min(xcol[band])) > xa or float(np.max(xcol[band])) < xb:
            raise ValueError("test support exits covered region (in x)")


def weak_residual(g: CharGrid, test_fns, ws: WaveSpeed | None = None) -> float:
    """Weak-form residual of the solution, evaluated in the characteristic
    plane for a family of smooth test bumps.

    For each phi the functional is

        iint [ (q sin z / 4) phi_X + (p sin w / 4) phi_Y
               - ( c' pq (1 - cos(w-z)) / (16 c^2)
                   + (v+v^3) pq (1+cos w)(1+cos z) / (16 c) ) phi ] dX dY

    with phi_X, phi_Y obtained from phi_t, phi_x through the coordinate
    slopes.  It vanishes identically for exact solutions (integrate by parts
    and use (p sin w)_Y + (q sin z)_X = -c'pq(1-cos(w-z))/(4c^2)
    - (v+v^3)pq(1+cos w)(1+cos z)/(4c)); the max absolute value over the
    family is returned.
    """
    ws = ws or g.ws
    if not g.coords_attached:
        raise ValueError("attach_coords must run before weak_residual")
    m = g.mask & np.isfinite(g.t)
    c = ws.c(g.v)
    cp = ws.c_prime(g.v)
    sw, sz = np.sin(g.w), np.sin(g.z)
    onecw, onecz = 1.0 + np.cos(g.w), 1.0 + np.cos(g.z)
    pq = g.p * g.q
    xX = onecw * g.p / 4.0
    xY = -onecz * g.q / 4.0
    tX = xX / c
    tY = onecz * g.q / (4.0 * c)
    zero_order = (cp * pq * (1.0 - np.cos(g.w - g.z)) / (16.0 * c * c)
                  + (g.v + g.v ** 3) * pq * onecw * onecz / (16.0 * c))

    worst = 0.0
    for fn in test_fns:
        _check_support_covered(g, fn)
        phi = fn.value(g.t, g.x)
        phit = fn.dt(g.t, g.x)
        phix = fn.dx(g.t, g.x)
        phiX = phit * tX + phix * xX
        phiY = phit * tY + phix * xY
        term = (g.q * sz / 4.0) * phiX + (g.p * sw / 4.0) * phiY - zero_order * phi
        resid = float(np.sum(np.where(m, term, 0.0))) * g.dX * g.dY
        worst = max(worst, abs(resid))
    return worst


def weak_residual_physical(states, ws: WaveSpeed, test_fns) -> float:
    """Same weak-form functional, evaluated in physical coordinates on a
    stack of uniformly spaced finite-difference snapshots (for oracle
    comparisons in the smooth regime)."""
    ts = np.array([st.t for st in states])
    if ts.size < 2:
        raise ValueError("need at least two snapshots")
    x = states[0].x
    worst = 0.0
    for fn in test_fns:
        vals = []
        for st in states:
            c = ws.c(st.v)
            cpr = ws.c_prime(st.v)
            vt = 0.5 * (st.R + st.S)
            vx = (st.R - st.S) / (2.0 * c)
            phi = fn.value(st.t, x)
            integrand = (fn.dt(st.t, x) * vt - c * c * fn.dx(st.t, x) * vx
                         - c * cpr * vx ** 2 * phi
                         - 0.5 * phi * (st.v + st.v ** 3))
            vals.append(trapezoid(integrand, x))
        worst = max(worst, abs(float(trapezoid(np.array(vals), ts))))
    return worst


def balance_residuals(states, ws: WaveSpeed) -> tuple[float, float]:
    """Centered-difference residuals of the two balance laws

        E_t + (c^2 M)_x = 0        M_t + (E - u)_x = 0

    on a stack of >= 3 uniformly spaced snapshots carrying (v, R, S)."""
    if len(states) < 3:
        raise ValueError("need at least three snapshots")
    ts = np.array([st.t for st in states])
    dts = np.diff(ts)
    if not np.allclose(dts, dts[0], rtol=1e-6):
        raise ValueError("snapshots must be uniformly spaced in t")
    dt = float(dts[0])
    x = states[0].x
    dx = float(x[1] - x[0])

    E = []
    flux_e = []
    M = []
    flux_m = []
    for st in states:
        c = ws.c(st.v)
        vt = 0.5 * (st.R + st.S)
        vx = (st.R - st.S) / (2.0 * c)
        u = 0.5 * st.v ** 2 + 0.25 * st.v ** 4
        e = energy_density(vt, vx, st.v, c)
        mm = -vt * vx
        E.append(e)
        M.append(mm)
        flux_e.append(c * c * mm)
        flux_m.append(e - u)
    E, M = np.array(E), np.array(M)
    flux_e, flux_m = np.array(flux_e), np.array(flux_m)

    def resid(dens, flux):
        r = ((dens[2:, 1:-1] - dens[:-2, 1:-1]) / (2 * dt)
             + (flux[1:-1, 2:] - flux[1:-1, :-2]) / (2 * dx))
        return float(np.max(np.abs(r)))

    return resid(E, flux_e), resid(M, flux_m)


@dataclass
class EnergyReport:
    """Energy time series with the bound data used to judge them."""

    times: list
    energy_phys: list
    energy_forms: list
    e0: float
    lipschitz_bound: float
    lam: list = field(default_factory=list)
    mu_total: list = field(default_factory=list)

    def max_drift(self) -> float:
        if self.e0 == 0.0:
            return max((abs(e) for e in self.energy_phys), default=0.0)
        return max((abs(e - self.e0) / self.e0 for e in self.energy_phys), default=0.0)

    def bound_satisfied(self, tol: float = 0.02) -> bool:
        return all(e <= self.e0 * (1.0 + tol) + 1e-14 for e in self.energy_phys)
