import copy

import numpy as np
import pytest

import charwave as cw
from charwave.physmap import (SINGULAR_EPS, coordinate_slopes, jacobian,
                              riemann_variables)

from conftest import solve_attached


class TestAttachCoords:
    def test_zero_data_exact_coordinates(self, zero_grid):
        _, _, g = zero_grid
        XX = np.repeat(g.Xs[:, None], g.ny, axis=1)
        YY = np.repeat(g.Ys[None, :], g.nx, axis=0)
        m = g.mask
        assert np.nanmax(np.abs(g.t - (XX + YY) / 2)[m]) < 1e-13
        assert np.nanmax(np.abs(g.x - (XX - YY) / 2)[m]) < 1e-13

    def test_anchoring_on_curve(self, bump_trig, bump_trig_grid):
        # nodes in the first masked row of each column sit within O(dY) of
        # the curve; recovered t there is O(dY), x close to the curve param
        _, bc = bump_trig
        g = bump_trig_grid
        cols = range(0, g.nx, 53)
        for i in cols:
            jf = np.argmax(g.mask[i])
            if not g.mask[i, jf]:
                continue
            assert 0.0 <= g.t[i, jf] <= 2.0 * g.dY
            xq = bc.x_of_X(np.array([g.Xs[i]]))[0]
            assert abs(g.x[i, jf] - xq) <= 2.0 * g.dY

    def test_compatibility_residual_zero_for_constant_runs(self, zero_grid):
        _, _, g = zero_grid
        rx, rt = cw.compatibility_residual(g)
        assert rx == 0.0 and rt == 0.0

    def test_compatibility_residual_refines(self, bump_trig, ws_trig):
        _, bc = bump_trig
        r = []
        for h in (0.04, 0.02):
            g = solve_attached(bc, ws_trig, h, 0.5, pad=0.3)
            r.append(cw.compatibility_residual(g))
        assert r[0][0] / r[1][0] >= 1.7
        assert r[0][1] / r[1][1] >= 1.7

    def test_corrupted_density_spikes_residual(self, bump_trig_grid):
        g = copy.deepcopy(bump_trig_grid)
        base, _ = cw.compatibility_residual(g)
        interior = np.argwhere(g.mask[2:-2, 2:-2]) + 2
        i, j = interior[len(interior) // 2]
        g.p[i, j] *= 3.0
        spiked, _ = cw.compatibility_residual(g)
        assert spiked > 10 * base


class TestSliceExtraction:
    def test_zero_data_slice_lies_on_antidiagonal(self, zero_grid):
        _, _, g = zero_grid
        s = cw.extract_time_slice(g, 0.5)
        assert np.all(s.v == 0.0)
        assert np.allclose(s.X + s.Y, 1.0, atol=1e-12)
        assert np.all(np.diff(s.x) > 0)

    def test_samples_strictly_increasing(self, bump_trig_grid):
        for tau in (0.25, 0.5, 1.0):
            s = cw.extract_time_slice(bump_trig_grid, tau)
            assert np.all(np.diff(s.x) > 0)

    def test_reconstruction_matches_riemann_variables(self, bump_trig_grid, ws_trig):
        s = cw.extract_time_slice(bump_trig_grid, 0.5)
        R, S = riemann_variables(s)
        assert np.allclose(s.vt, (R + S) / 2, equal_nan=True)
        assert np.allclose(s.vx, (R - S) / (2 * ws_trig.c(s.v)), equal_nan=True)

    def test_tau_out_of_range(self, bump_trig_grid):
        with pytest.raises(ValueError, match="outside recovered range"):
            cw.extract_time_slice(bump_trig_grid, 1e9)

    def test_requires_coordinates(self, bump_trig, ws_trig):
        _, bc = bump_trig
        dom = cw.domain_for_time(bc, ws_trig, 0.3, pad=0.3)
        g = cw.solve_march(bc, dom, 0.05, 0.05, ws_trig)
        with pytest.raises(ValueError, match="attach_coords"):
            cw.extract_time_slice(g, 0.1)

    def test_blowup_slice_singular_flags_and_finite_fields(self, blowup_grid):
        g = blowup_grid
        onec = np.minimum(1 + np.cos(g.w), 1 + np.cos(g.z))
        sel = g.mask & (onec < SINGULAR_EPS) & np.isfinite(g.t)
        assert np.any(sel), "blow-up run should drive angles to the degenerate value"
        idx = np.unravel_index(int(np.argmin(np.where(sel, onec, np.inf))), onec.shape)
        s = cw.extract_time_slice(g, float(g.t[idx]))
        assert np.sum(s.singular) >= 1
        for a in (s.v, s.w, s.z, s.p, s.q, s.x):
            assert np.all(np.isfinite(a))
        assert np.all(np.isnan(s.vt[s.singular]))


class TestResample:
    def test_zero_slice(self, zero_grid):
        _, _, g = zero_grid
        s = cw.extract_time_slice(g, 0.5)
        out = cw.resample_uniform(s, np.linspace(s.x[0], s.x[-1], 64))
        assert np.all(out["v"] == 0.0)
        assert np.all(out["vt"] == 0.0)

    def test_identity_on_own_nodes(self, bump_trig_grid):
        s = cw.extract_time_slice(bump_trig_grid, 0.5)
        out = cw.resample_uniform(s, s.x)
        assert np.allclose(out["v"], s.v, rtol=0, atol=1e-14)
        assert np.allclose(out["vt"], s.vt, rtol=0, atol=1e-12)

    def test_range_validated(self, bump_trig_grid):
        s = cw.extract_time_slice(bump_trig_grid, 0.5)
        with pytest.raises(ValueError, match="beyond"):
            cw.resample_uniform(s, np.array([s.x[0] - 1.0]))

    def test_missing_between_singular_neighbours(self, bump_trig_grid):
        s = copy.deepcopy(cw.extract_time_slice(bump_trig_grid, 0.5))
        k = len(s) // 2
        s.singular[k] = True
        s.vt[k] = np.nan
        xq = np.array([0.5 * (s.x[k - 1] + s.x[k]), 0.5 * (s.x[k + 20] + s.x[k + 21])])
        out = cw.resample_uniform(s, xq)
        assert np.isnan(out["vt"][0])
        assert np.isfinite(out["vt"][1])
        assert np.all(np.isfinite(out["v"]))   # v itself is always available

    def test_resampled_energy_consistent(self, bump_trig_grid, ws_trig):
        from charwave.diagnostics import energy_density, energy_physical
        from scipy.integrate import trapezoid
        s = cw.extract_time_slice(bump_trig_grid, 0.5)
        direct = energy_physical(s, ws_trig)
        xg = np.linspace(s.x[0], s.x[-1], 4 * len(s))
        out = cw.resample_uniform(s, xg)
        dens = energy_density(out["vt"], out["vx"], out["v"], ws_trig.c(out["v"]))
        resampled = float(trapezoid(dens, xg))
        assert resampled == pytest.approx(direct, rel=1e-3)


class TestGeometry:
    def test_jacobian_nonnegative(self, bump_trig_grid):
        J = jacobian(bump_trig_grid)
        assert np.nanmin(J[bump_trig_grid.mask]) > 0.0

    def test_jacobian_vanishes_only_on_singular_set(self, blowup_grid):
        g = blowup_grid
        J = jacobian(g)
        m = g.mask
        onec = np.minimum(1 + np.cos(g.w), 1 + np.cos(g.z))
        regular = m & (onec >= 1e-6)
        assert np.all(J[regular] > 0)
        assert np.nanmin(J[m]) >= 0.0

    def test_slopes_sign_structure(self, bump_trig_grid):
        xX, xY, tX, tY = coordinate_slopes(bump_trig_grid)
        m = bump_trig_grid.mask
        assert np.nanmin(xX[m]) >= 0 and np.nanmax(xY[m]) <= 0
        assert np.nanmin(tX[m]) >= 0 and np.nanmin(tY[m]) >= 0

    def test_characteristic_speed_along_rows(self, bump_trig_grid, ws_trig):
        # along Y = const the recovered curve satisfies dx/dt = c(v) to O(h)
        g = bump_trig_grid
        worst = 0.0
        for j in range(0, g.ny, 41):
            ii = np.where(g.mask[:, j])[0]
            if ii.size < 3:
                continue
            tt, xx, vv = g.t[ii, j], g.x[ii, j], g.v[ii, j]
            dxdt = np.diff(xx) / np.diff(tt)
            cmid = ws_trig.c(0.5 * (vv[:-1] + vv[1:]))
            worst = max(worst, float(np.max(np.abs(dxdt - cmid))))
        assert worst < 5 * g.dX

    def test_holder_continuity_on_grid(self, bump_trig, bump_trig_grid, ws_trig):
        # |v(P)-v(Q)| <= C d^(1/2) with a stable C: checked via the report
        g2 = solve_attached(bump_trig[1], ws_trig, 0.04, 1.1)
        rep = cw.holder_check([g2, bump_trig_grid], window=(0.1, 1.0, -1.2, 1.2))
        assert rep.stable
        assert all(c < 5.0 for c in rep.coefficients)
