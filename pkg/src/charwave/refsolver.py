"""Independent physical-space finite-difference solver for cross-validation.

Evolves the Riemann variables directly on an x-grid:

    R_t - c R_x = c'/(4c) (R^2 - S^2) - (v+v^3)/2     (left-moving family)
    S_t + c S_x = c'/(4c) (S^2 - R^2) - (v+v^3)/2     (right-moving family)
    v_t = (R + S)/2

with first-order upwind transport and explicit midpoint time stepping.
Deliberately simple: this is the oracle the characteristic pipeline is
checked against in the smooth regime, and the witness that the quadratic
source genuinely diverges in finite time on blow-up data (the characteristic
solver stays bounded through the same event).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from .initdata import InitialData
from .wavespeed import WaveSpeed

__all__ = ["FDState", "FDRun", "fd_solve", "compare", "dispersion_fit", "BLOWUP_THRESHOLD"]

# far beyond any smooth-regime value at desk scale; unambiguous divergence
BLOWUP_THRESHOLD = 1e6


@dataclass
class FDState:
    x: np.ndarray
    v: np.ndarray
    R: np.ndarray
    S: np.ndarray
    t: float
    dt: float

    def vt(self):
        return 0.5 * (self.R + self.S)

    def vx(self, ws: WaveSpeed):
        return (self.R - self.S) / (2.0 * ws.c(self.v))


@dataclass
class FDRun:
    snapshots: list = field(repr=False)
    status: str = "completed"    # | blow-up detected | numerical blow-up
    t_final: float = 0.0

    @property
    def completed(self) -> bool:
        return self.status == "completed"


def _rhs(R, S, v, dx, ws: WaveSpeed):
    c = ws.c(v)
    cp = ws.c_prime(v)
    Rx = np.empty_like(R)
    Rx[:-1] = (R[1:] - R[:-1]) / dx       # forward: transport speed is -c
    Rx[-1] = -R[-1] / dx
    Sx = np.empty_like(S)
    Sx[1:] = (S[1:] - S[:-1]) / dx        # backward: transport speed is +c
    Sx[0] = S[0] / dx
    src = 0.5 * (v + v ** 3)
    quad = cp / (4.0 * c) * (R * R - S * S)
    Rdot = c * Rx + quad - src
    Sdot = -c * Sx - quad - src
    vdot = 0.5 * (R + S)
    return Rdot, Sdot, vdot


def fd_solve(d: InitialData, ws: WaveSpeed, cfl: float, T: float,
             record_times, pad: float | None = None) -> FDRun:
    """Run the upwind solver to time T, snapshotting at record_times.

    The grid extends the data window by ``pad`` (default: kappa*T plus a
    margin) so the waves never reach the ends.  Aborts with status
    "blow-up detected" once max(|R|, |S|) exceeds 1e6, or
    "numerical blow-up" (keeping the last valid snapshot) on NaN.
    """
    if not (0.0 < cfl < 1.0):
        raise ValueError(f"cfl must be in (0, 1), got {cfl}")
    if T <= 0:
        raise ValueError("T must be positive")
    kappa = ws.bounds().kappa
    dx = d.dx
    if pad is None:
        pad = kappa * T + 0.5
    n_pad = int(np.ceil(pad / dx))
    x = np.concatenate([
        d.x[0] - dx * np.arange(n_pad, 0, -1), d.x,
        d.x[-1] + dx * np.arange(1, n_pad + 1)])
    z = np.zeros(n_pad)
    v = np.concatenate([z, d.v0, z])
    R = np.concatenate([z, d.r0, z])
    S = np.concatenate([z, d.s0, z])

    dt0 = cfl * dx / kappa
    n_steps = int(np.ceil(T / dt0))
    dt = T / n_steps

    record = sorted(float(r) for r in record_times)
    snaps = []
    k_rec = 0
    t = 0.0
    while k_rec < len(record) and record[k_rec] <= 0.5 * dt:
        snaps.append(FDState(x=x, v=v.copy(), R=R.copy(), S=S.copy(), t=t, dt=dt))
        k_rec += 1

    for _ in range(n_steps):
        R0, S0, v0 = R, S, v
        dR, dS, dv = _rhs(R, S, v, dx, ws)
        Rm = R + 0.5 * dt * dR
        Sm = S + 0.5 * dt * dS
        vm = v + 0.5 * dt * dv
        dR, dS, dv = _rhs(Rm, Sm, vm, dx, ws)
        R = R + dt * dR
        S = S + dt * dS
        v = v + dt * dv
        t += dt

        if not (np.all(np.isfinite(R)) and np.all(np.isfinite(S)) and np.all(np.isfinite(v))):
            snaps.append(FDState(x=x, v=v0.copy(), R=R0.copy(), S=S0.copy(),
                                 t=t - dt, dt=dt))
            return FDRun(snapshots=snaps, status="numerical blow-up", t_final=t - dt)
        if max(float(np.max(np.abs(R))), float(np.max(np.abs(S)))) > BLOWUP_THRESHOLD:
            snaps.append(FDState(x=x, v=v.copy(), R=R.copy(), S=S.copy(), t=t, dt=dt))
            return FDRun(snapshots=snaps, status="blow-up detected", t_final=t)

        while k_rec < len(record) and t >= record[k_rec] - 0.5 * dt:
            snaps.append(FDState(x=x, v=v.copy(), R=R.copy(), S=S.copy(), t=t, dt=dt))
            k_rec += 1

    return FDRun(snapshots=snaps, status="completed", t_final=t)


def compare(s, fd: FDState) -> tuple[float, float]:
    """L-infinity and L2 differences of v between a time slice and an FD
    snapshot, resampled onto the overlapping part of the FD grid."""
    if abs(s.tau - fd.t) > fd.dt + 1e-12:
        raise ValueError(f"slice time {s.tau} and snapshot time {fd.t} differ by more than dt")
    lo = max(s.x[0], fd.x[0])
    hi = min(s.x[-1], fd.x[-1])
    if hi <= lo:
        raise ValueError("slice and snapshot do not overlap in x")
    sel = (fd.x >= lo) & (fd.x <= hi)
    xg = fd.x[sel]
    dv = np.interp(xg, s.x, s.v) - fd.v[sel]
    linf = float(np.max(np.abs(dv)))
    l2 = float(np.sqrt(trapezoid(dv * dv, xg)))
    return linf, l2


def dispersion_fit(snapshots, k: float) -> float:
    """Observed angular frequency of the Fourier mode at wavenumber k.

    Each linear mode rotates as exp(-i w t); the slope of the unwrapped
    phase of int v e^{-ikx} dx over the snapshot times gives w.
    """
    ts, phases = [], []
    for st in snapshots:
        coef = trapezoid(st.v * np.exp(-1j * k * st.x), st.x)
        ts.append(st.t)
        phases.append(np.angle(coef))
    ts = np.array(ts)
    phases = np.unwrap(np.array(phases))
    slope = np.polyfit(ts, phases, 1)[0]
    return float(-slope)


def discrete_energy(st: FDState, ws: WaveSpeed) -> float:
    """Trapezoid energy of an FD snapshot (drift monitor for the oracle)."""
    c = ws.c(st.v)
    vt = st.vt()
    vx = st.vx(ws)
    dens = 0.5 * (vt ** 2 + (c * vx) ** 2 + 0.5 * st.v ** 2 + 0.25 * st.v ** 4)
    return float(trapezoid(dens, st.x))
