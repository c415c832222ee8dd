import numpy as np
import pytest

import charwave as cw


@pytest.fixture(scope="session")
def ws_const():
    return cw.WaveSpeed.constant(1.0)


@pytest.fixture(scope="session")
def ws_trig():
    return cw.WaveSpeed.trigonometric(4.0, 1.0)


@pytest.fixture(scope="session")
def bump_const(ws_const):
    """Standard smooth bump, constant speed: data and boundary curve."""
    v0, v1 = cw.make_family("gaussian_bump", ws_const, amplitude=0.5,
                            width=0.3, support=1.0)
    d = cw.sample_initial(v0, v1, (-1.0, 1.0), 0.001, ws_const)
    return d, cw.build_boundary_curve(d, ws_const)


@pytest.fixture(scope="session")
def bump_trig(ws_trig):
    v0, v1 = cw.make_family("gaussian_bump", ws_trig, amplitude=0.4,
                            width=0.35, support=0.8)
    d = cw.sample_initial(v0, v1, (-0.8, 0.8), 0.001, ws_trig)
    return d, cw.build_boundary_curve(d, ws_trig)


def solve_attached(bc, ws, h, T, pad=0.4):
    dom = cw.domain_for_time(bc, ws, T, pad=pad)
    return cw.attach_coords(cw.solve_march(bc, dom, h, h, ws), bc)


@pytest.fixture(scope="session")
def bump_const_grid(bump_const, ws_const):
    """Bump run at dX = 0.02, reaching t = 1."""
    return solve_attached(bump_const[1], ws_const, 0.02, 1.1)


@pytest.fixture(scope="session")
def bump_const_grid_fine(bump_const, ws_const):
    return solve_attached(bump_const[1], ws_const, 0.01, 1.1)


@pytest.fixture(scope="session")
def bump_trig_grid(bump_trig, ws_trig):
    return solve_attached(bump_trig[1], ws_trig, 0.02, 1.1)


@pytest.fixture(scope="session")
def zero_grid(ws_const):
    v0, v1 = cw.make_family("zero", ws_const)
    d = cw.sample_initial(v0, v1, (-1.0, 1.0), 0.01, ws_const)
    bc = cw.build_boundary_curve(d, ws_const)
    g = cw.solve_march(bc, (-2.0, 2.0, -2.0, 2.0), 0.02, 0.02, ws_const)
    return d, bc, cw.attach_coords(g, bc)


@pytest.fixture(scope="session")
def blowup_setup(ws_trig):
    v0, v1 = cw.make_family("ghz_blowup", ws_trig)
    d = cw.sample_initial(v0, v1, (-0.9, 0.9), 5e-4, ws_trig)
    return d, cw.build_boundary_curve(d, ws_trig)


@pytest.fixture(scope="session")
def blowup_grid(blowup_setup, ws_trig):
    """Characteristic solve of the blow-up data, past the gradient blow-up."""
    return solve_attached(blowup_setup[1], ws_trig, 0.025, 0.6, pad=0.3)


@pytest.fixture(scope="session")
def packet_setup(ws_const):
    """Small-amplitude dispersion-matched packet (oracle-comparison data)."""
    amp, k = 1e-3, 4.0
    v0, v1 = cw.make_family("sine_packet", ws_const, amplitude=amp,
                            wavenumber=k, width=1.5)
    d = cw.sample_initial(v0, v1, (-1.6, 1.6), 1e-3, ws_const)
    return d, cw.build_boundary_curve(d, ws_const), amp, k


def slices_at(g, taus):
    return [cw.extract_time_slice(g, t) for t in taus]


def max_abs(a, mask):
    return float(np.nanmax(np.abs(a[mask])))
