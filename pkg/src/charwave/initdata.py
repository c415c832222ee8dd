"""Initial data handling: sampling (v0, v1), Riemann variables at t = 0,
ground energy, and the boundary curve of the characteristic plane.

All data is represented as samples on a uniform grid with enforced compact
support, so every integral below is a trapezoid sum with O(dx^2) error and
no tail handling.  The grid must contain x = 0 as a node because both
coordinate integrals anchor there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from .wavespeed import WaveSpeed

__all__ = [
    "Profile",
    "InitialData",
    "BoundaryCurve",
    "sample_initial",
    "ground_energy",
    "build_boundary_curve",
    "make_family",
    "profile_from_csv",
    "reflect_time",
]


class Profile:
    """A compactly supported function of x with an optional analytic derivative."""

    def __init__(self, fn: Callable, dfn: Optional[Callable] = None):
        self.fn = fn
        self.dfn = dfn

    def __call__(self, x):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    def derivative(self, x):
        if self.dfn is None:
            return None
        return np.asarray(self.dfn(np.asarray(x, dtype=float)), dtype=float)


def zero_profile() -> Profile:
    return Profile(lambda x: np.zeros_like(x), lambda x: np.zeros_like(x))


def _window(s):
    """Smooth cutoff exp(-s^2/(1-s^2)) on |s| < 1, identically 0 outside."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    out[inside] = np.exp(-si * si / (1.0 - si * si))
    return out


def _window_prime(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    om = 1.0 - si * si
    out[inside] = np.exp(-si * si / om) * (-2.0 * si / (om * om))
    return out


def bump_profile(amplitude: float, center: float = 0.0, width: float = 0.3,
                 support: float = 1.0) -> Profile:
    """Gaussian-shaped bump hard-cut to [center - support, center + support]."""
    a, x0, sg, L = float(amplitude), float(center), float(width), float(support)
    if sg <= 0 or L <= 0:
        raise ValueError("bump width and support must be positive")

    def fn(x):
        u = x - x0
        return a * np.exp(-u * u / (2 * sg * sg)) * _window(u / L)

    def dfn(x):
        u = x - x0
        g = np.exp(-u * u / (2 * sg * sg))
        return a * (g * _window_prime(u / L) / L - (u / (sg * sg)) * g * _window(u / L))

    return Profile(fn, dfn)


def packet_profile(amplitude: float, wavenumber: float, width: float,
                   center: float = 0.0, phase: float = 0.0) -> Profile:
    """Oscillatory packet A*cos(k(x-x0)+phase) under the smooth cutoff window."""
    a, k, L, x0, ph = float(amplitude), float(wavenumber), float(width), float(center), float(phase)
    if L <= 0:
        raise ValueError("packet width must be positive")

    def fn(x):
        u = x - x0
        return a * np.cos(k * u + ph) * _window(u / L)

    def dfn(x):
        u = x - x0
        return a * (-k * np.sin(k * u + ph) * _window(u / L)
                    + np.cos(k * u + ph) * _window_prime(u / L) / L)

    return Profile(fn, dfn)


def make_family(name: str, ws: WaveSpeed, **params) -> tuple[Profile, Profile]:
    """Built-in (v0, v1) pairs selectable from configuration.

    zero            -- the trivial state.
    gaussian_bump   -- bump on v0 (amplitude) and optionally on v1
                       (amplitude_v1); center/width/support shared.
    sine_packet     -- right-moving packet matched to the linearized
                       dispersion relation w^2 = k^2 + 1/2 (meant for the
                       constant-speed cross-check).
    ghz_blowup      -- broad displacement plateau plus a strong narrow
                       velocity pulse; the quadratic source then drives the
                       gradients to blow up in finite time for non-constant c.
    """
    if name == "zero":
        return zero_profile(), zero_profile()

    if name == "gaussian_bump":
        amp = params.get("amplitude", 0.5)
        amp1 = params.get("amplitude_v1", 0.0)
        center = params.get("center", 0.0)
        width = params.get("width", 0.3)
        support = params.get("support", 1.0)
        v0 = bump_profile(amp, center, width, support) if amp != 0 else zero_profile()
        v1 = bump_profile(amp1, center, width, support) if amp1 != 0 else zero_profile()
        return v0, v1

    if name == "sine_packet":
        amp = params.get("amplitude", 1e-3)
        k = params.get("wavenumber", 4.0)
        width = params.get("width", 1.5)
        center = params.get("center", 0.0)
        omega = np.sqrt(k * k + 0.5)
        v0 = packet_profile(amp, k, width, center, phase=0.0)
        # v1 = omega * A * sin(k u) * W: picks out the right-moving branch
        v1 = packet_profile(omega * amp, k, width, center, phase=-np.pi / 2.0)
        return v0, v1

    if name == "ghz_blowup":
        # A broad displacement plateau parks v where c'(v) is large and of
        # one sign; a strong narrow velocity pulse then drives the Riemann
        # variables through the quadratic source until the transported
        # angles reach the degenerate value in finite time.
        amp = params.get("amplitude", 0.6)
        center = params.get("center", 0.0)
        width = params.get("width", 0.45)
        support = params.get("support", 0.8)
        pulse_amp = params.get("pulse_amplitude", 40.0)
        pulse_width = params.get("pulse_width", 0.015)
        pulse_center = params.get("pulse_center", 0.0)
        v0 = bump_profile(amp, center, width, support)
        v1 = bump_profile(pulse_amp, pulse_center, pulse_width,
                          min(5.0 * pulse_width, support))
        return v0, v1

    raise ValueError(f"unknown initial-data family {name!r}")


def profile_from_csv(path) -> Profile:
    """Two-column CSV (x, value); linearly interpolated, zero outside."""
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns (x, value)")
    xs, vals = data[:, 0], data[:, 1]
    if not np.all(np.diff(xs) > 0):
        raise ValueError(f"{path}: x column must be strictly increasing")
    return Profile(lambda x: np.interp(x, xs, vals, left=0.0, right=0.0))


@dataclass
class InitialData:
    """Sampled (v0, v1) with the derived Riemann variables at t = 0."""

    x: np.ndarray
    dx: float
    v0: np.ndarray
    v0x: np.ndarray
    v1: np.ndarray
    r0: np.ndarray          # v1 + c(v0) v0x
    s0: np.ndarray          # v1 - c(v0) v0x
    e0: float               # ground energy
    v_max: float            # a-priori sup bound on |v(t, .)|

    def source_sup(self) -> float:
        """Finite stand-in for sup |v + v^3| over the solution's range."""
        return self.v_max + self.v_max ** 3

    def potential_sup(self) -> float:
        """Bound on sup_t of the potential integral, 2*e0 since E(t) <= e0."""
        return 2.0 * self.e0


def _build_grid(window: tuple[float, float], dx: float) -> np.ndarray:
    lo, hi = window
    if not (dx > 0 and hi > lo):
        raise ValueError("window must be nonempty and dx positive")
    # integer multiples of dx so that x = 0 is always a node
    i0 = int(np.floor(lo / dx + 1e-9))
    i1 = int(np.ceil(hi / dx - 1e-9))
    return dx * np.arange(i0, i1 + 1)


def ground_energy(d: "InitialData", ws: WaveSpeed) -> float:
    """(1/2) integral of v1^2 + c^2(v0) v0x^2 + v0^2/2 + v0^4/4."""
    c = ws.c(d.v0)
    dens = d.v1 ** 2 + c * c * d.v0x ** 2 + 0.5 * d.v0 ** 2 + 0.25 * d.v0 ** 4
    return 0.5 * float(trapezoid(dens, d.x))


def sample_initial(v0_profile: Profile, v1_profile: Profile,
                   window: tuple[float, float], dx: float,
                   ws: WaveSpeed) -> InitialData:
    """Sample the data on a uniform grid and derive R(0,.), S(0,.), e0.

    The window must contain the support of both profiles; values at (and
    beyond) both ends have to vanish, otherwise the compact-support
    assumptions behind the curve construction fail.
    """
    x = _build_grid(window, dx)
    v0 = v0_profile(x)
    v1 = v1_profile(x)
    v0x = v0_profile.derivative(x)
    if v0x is None:
        v0x = np.gradient(v0, dx, edge_order=2)

    for name, arr in (("v0", v0), ("v1", v1), ("v0x", v0x)):
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"initial data {name} contains non-finite samples")
    ends = np.array([v0[0], v0[-1], v1[0], v1[-1], v0x[0], v0x[-1]])
    if np.any(np.abs(ends) > 0.0):
        raise ValueError("support of the initial data is not contained in the window")

    c = ws.c(v0)
    r0 = v1 + c * v0x
    s0 = v1 - c * v0x
    d = InitialData(x=x, dx=float(dx), v0=v0, v0x=v0x, v1=v1, r0=r0, s0=s0,
                    e0=0.0, v_max=0.0)
    d.e0 = ground_energy(d, ws)
    kappa = ws.bounds().kappa
    d.v_max = float(np.sqrt(2.0 * kappa * d.e0) + np.max(np.abs(v0)))
    return d


def reflect_time(d: InitialData) -> InitialData:
    """Data for the t <= 0 half-plane: t -> -t flips v1 and swaps R and S."""
    return InitialData(x=d.x, dx=d.dx, v0=d.v0, v0x=d.v0x, v1=-d.v1,
                       r0=-d.s0, s0=-d.r0, e0=d.e0, v_max=d.v_max)


@dataclass
class BoundaryCurve:
    """Image of the line t = 0 in the (X, Y) plane, with its boundary data.

    X(x) and Y(x) are the cumulative trapezoids of 1+R^2 and -(1+S^2)
    anchored at x = 0, so X is strictly increasing and Y strictly decreasing.
    Outside the sampled window both slopes are exactly +-1 (compact support),
    which is used to extend every query linearly.
    """

    x: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    w_bar: np.ndarray
    z_bar: np.ndarray
    v_bar: np.ndarray
    p_bar: float = 1.0
    q_bar: float = 1.0

    def x_of_X(self, Xq):
        Xq = np.asarray(Xq, dtype=float)
        out = np.interp(Xq, self.X, self.x)
        out = np.where(Xq > self.X[-1], self.x[-1] + (Xq - self.X[-1]), out)
        out = np.where(Xq < self.X[0], self.x[0] + (Xq - self.X[0]), out)
        return out

    def x_of_Y(self, Yq):
        Yq = np.asarray(Yq, dtype=float)
        # Y decreases with x; reverse for interp
        out = np.interp(Yq, self.Y[::-1], self.x[::-1])
        out = np.where(Yq < self.Y[-1], self.x[-1] - (Yq - self.Y[-1]), out)
        out = np.where(Yq > self.Y[0], self.x[0] - (Yq - self.Y[0]), out)
        return out

    def _field_at_x(self, arr, xq):
        return np.interp(xq, self.x, arr, left=0.0, right=0.0)

    def phi(self, Xq):
        """Y = phi(X) along the curve."""
        return self.Y_of_x(self.x_of_X(Xq))

    def phi_inv(self, Yq):
        """X = phi^{-1}(Y) along the curve."""
        return self.X_of_x(self.x_of_Y(Yq))

    def X_of_x(self, xq):
        xq = np.asarray(xq, dtype=float)
        out = np.interp(xq, self.x, self.X)
        out = np.where(xq > self.x[-1], self.X[-1] + (xq - self.x[-1]), out)
        out = np.where(xq < self.x[0], self.X[0] + (xq - self.x[0]), out)
        return out

    def Y_of_x(self, xq):
        xq = np.asarray(xq, dtype=float)
        out = np.interp(xq, self.x, self.Y)
        out = np.where(xq > self.x[-1], self.Y[-1] - (xq - self.x[-1]), out)
        out = np.where(xq < self.x[0], self.Y[0] - (xq - self.x[0]), out)
        return out

    def data_at_X(self, Xq) -> dict:
        """Curve point and boundary values for given X (vectorized)."""
        xq = self.x_of_X(Xq)
        return {
            "x": xq,
            "Y": self.Y_of_x(xq),
            "w": self._field_at_x(self.w_bar, xq),
            "z": self._field_at_x(self.z_bar, xq),
            "v": self._field_at_x(self.v_bar, xq),
        }

    def data_at_Y(self, Yq) -> dict:
        xq = self.x_of_Y(Yq)
        return {
            "x": xq,
            "X": self.X_of_x(xq),
            "w": self._field_at_x(self.w_bar, xq),
            "z": self._field_at_x(self.z_bar, xq),
            "v": self._field_at_x(self.v_bar, xq),
        }


def build_boundary_curve(d: InitialData, ws: WaveSpeed) -> BoundaryCurve:
    """Construct the curve Y = phi(X) with its boundary data."""
    i0 = int(np.argmin(np.abs(d.x)))
    if abs(d.x[i0]) > 1e-12 * max(1.0, d.dx):
        raise ValueError("x = 0 must be a grid node (both coordinate integrals anchor there)")
    X = cumulative_trapezoid(1.0 + d.r0 ** 2, d.x, initial=0.0)
    X -= X[i0]
    Y = -cumulative_trapezoid(1.0 + d.s0 ** 2, d.x, initial=0.0)
    Y -= Y[i0]
    return BoundaryCurve(
        x=d.x.copy(), X=X, Y=Y,
        w_bar=2.0 * np.arctan(d.r0),
        z_bar=2.0 * np.arctan(d.s0),
        v_bar=d.v0.copy(),
    )
