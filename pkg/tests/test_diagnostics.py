import numpy as np
import pytest
from scipy.integrate import trapezoid

import charwave as cw
from charwave import diagnostics as diag
from charwave.physmap import TimeSlice

from conftest import slices_at, solve_attached


def synthetic_slice(x, v, vt, vx, ws):
    """TimeSlice assembled directly from physical fields (t = 0 data)."""
    c = ws.c(v)
    R = vt + c * vx
    S = vt - c * vx
    return TimeSlice(tau=0.0, x=x, v=v, vt=vt, vx=vx,
                     singular=np.zeros_like(x, dtype=bool),
                     X=np.zeros_like(x), Y=np.zeros_like(x),
                     w=2 * np.arctan(R), z=2 * np.arctan(S),
                     p=np.ones_like(x), q=np.ones_like(x))


class TestEnergyPhysical:
    def test_zero_slice(self, zero_grid, ws_const):
        _, _, g = zero_grid
        s = cw.extract_time_slice(g, 0.5)
        assert diag.energy_physical(s, ws_const) == 0.0

    def test_initial_slice_equals_ground_energy(self, bump_trig, ws_trig):
        d, _ = bump_trig
        s = synthetic_slice(d.x, d.v0, d.v1, d.v0x, ws_trig)
        assert diag.energy_physical(s, ws_trig) == pytest.approx(d.e0, rel=1e-6)

    def test_bump_drift_small(self, bump_trig, bump_trig_grid, ws_trig):
        d, _ = bump_trig
        for tau in (0.25, 0.5, 1.0):
            E = diag.energy_physical(cw.extract_time_slice(bump_trig_grid, tau), ws_trig)
            assert abs(E - d.e0) / d.e0 < 1e-2

    def test_warning_when_many_samples_singular(self, bump_trig_grid, ws_trig):
        import copy
        s = copy.deepcopy(cw.extract_time_slice(bump_trig_grid, 0.5))
        s.singular[: len(s) // 2] = True
        with pytest.warns(RuntimeWarning, match="unreliable"):
            diag.energy_physical(s, ws_trig)


class TestEnergyForms:
    def test_zero(self, zero_grid):
        _, _, g = zero_grid
        assert diag.energy_forms(g, 0.5) == 0.0

    def test_tau_independent_and_close_to_physical(self, bump_trig, bump_trig_grid, ws_trig):
        d, _ = bump_trig
        vals = [diag.energy_forms(bump_trig_grid, t) for t in (0.25, 0.5, 1.0)]
        for v in vals:
            assert abs(v - vals[0]) <= 0.02 * abs(vals[0])
        E = diag.energy_physical(cw.extract_time_slice(bump_trig_grid, 0.5), ws_trig)
        assert abs(vals[1] - E) <= 0.02 * E

    def test_form_integral_stays_exact_through_blowup(self, blowup_setup, blowup_grid):
        # quadrature loses the concentrated part, the line integral does not
        d, _ = blowup_setup
        v = diag.energy_forms(blowup_grid, 0.25)
        assert abs(v - d.e0) / d.e0 < 0.02


class TestClosedness:
    def test_zero_run(self, zero_grid):
        _, _, g = zero_grid
        assert diag.closedness_residual(g) == (0.0, 0.0)

    def test_refinement_halves_residuals(self, bump_trig, ws_trig):
        _, bc = bump_trig
        vals = []
        for h in (0.04, 0.02):
            g = solve_attached(bc, ws_trig, h, 0.5, pad=0.3)
            vals.append(diag.closedness_residual(g))
        assert vals[0][0] / vals[1][0] >= 1.8
        assert vals[0][1] / vals[1][1] >= 1.8

    def test_small_data_residual_tiny(self, packet_setup, ws_const):
        _, bc, _, _ = packet_setup
        g = solve_attached(bc, ws_const, 0.005, 0.55, pad=0.3)
        ce, cm = diag.closedness_residual(g)
        assert ce <= 1e-6 and cm <= 1e-6


class TestMeasures:
    def test_zero_run(self, zero_grid):
        _, _, g = zero_grid
        table = diag.measures(g, 0.5, [(-1, 0), (0, 1)])
        assert table.total == 0.0
        for row in table.rows:
            assert row.mu_minus == 0.0 and row.mu_plus == 0.0

    def test_totals_match_ground_energy(self, bump_trig, bump_trig_grid):
        d, _ = bump_trig
        for tau in (0.25, 0.5, 1.0):
            t = diag.measures(bump_trig_grid, tau, [(-1, 1)])
            assert t.total == pytest.approx(d.e0, rel=0.02)

    def test_smooth_case_identity(self, bump_trig_grid, ws_trig):
        # 1-form measures vs the physical-space density R^2/4 (+ potential)
        s = cw.extract_time_slice(bump_trig_grid, 0.5)
        a, b = -1.0, 0.5
        table = diag.measures(bump_trig_grid, 0.5, [(a, b)], slice_=s)
        wm, wp, pot = diag.slice_measure_parts(s, ws_trig, a, b)
        row = table.rows[0]
        assert row.mu_minus == pytest.approx(wm + pot, rel=0.02)
        assert row.mu_plus == pytest.approx(wp + pot, rel=0.02)

    def test_interval_outside_range_marked_empty(self, bump_trig_grid):
        t = diag.measures(bump_trig_grid, 0.5, [(1e6, 2e6)])
        assert t.rows[0].empty
        assert np.isnan(t.rows[0].mu_minus)

    def test_measures_nonnegative(self, bump_trig_grid):
        t = diag.measures(bump_trig_grid, 0.5, [(-2, -1), (-1, 0), (0, 1), (1, 2)])
        for row in t.rows:
            assert row.mu_minus >= -1e-12 and row.mu_plus >= -1e-12


class TestInteractionPotential:
    def test_zero_slice(self, zero_grid, ws_const):
        _, _, g = zero_grid
        s = cw.extract_time_slice(g, 0.5)
        assert diag.interaction_potential(s, ws_const) == 0.0

    def test_disjoint_supports_hand_integral(self, ws_const):
        # S-support entirely left of R-support: Lambda = (1/4)||R||^2 ||S||^2
        x = np.linspace(-2, 2, 4001)
        S_prof = np.where((x > -1.5) & (x < -0.5), 0.8, 0.0)
        R_prof = np.where((x > 0.5) & (x < 1.5), 0.6, 0.0)
        vt = (R_prof + S_prof) / 2
        vx = (R_prof - S_prof) / 2
        s = synthetic_slice(x, np.zeros_like(x), vt, vx, ws_const)
        lam = diag.interaction_potential(s, ws_const)
        expected = 0.25 * trapezoid(R_prof ** 2, x) * trapezoid(S_prof ** 2, x)
        assert lam == pytest.approx(expected, rel=1e-12)

    def test_slope_bounded_on_bump_run(self, bump_trig, bump_trig_grid, ws_trig):
        d, _ = bump_trig
        taus = np.linspace(0.1, 1.0, 10)
        slices = slices_at(bump_trig_grid, taus)
        lams = [diag.interaction_potential(s, ws_trig) for s in slices]
        bound = diag.lambda_slope_bound(d.e0, ws_trig, d.v_max)
        slopes = [(lams[j] - lams[i]) / (taus[j] - taus[i])
                  for i in range(10) for j in range(i + 1, 10)]
        assert max(slopes) <= bound

    def test_slope_bound_constant_speed_formula(self, ws_const):
        # with c' = 0 the bound reduces to 8 e0^2 (1 + v_max^2)
        assert diag.lambda_slope_bound(0.5, ws_const, 2.0) == pytest.approx(
            8 * 0.25 * 5.0)


class TestLipschitz:
    def test_bound_formula(self, ws_trig):
        b = ws_trig.bounds()
        assert diag.lipschitz_bound(0.5, b) == pytest.approx(np.sqrt(4 * 9 * 0.5))

    def test_zero_run(self, zero_grid, ws_const):
        _, _, g = zero_grid
        rep = diag.lipschitz_check(slices_at(g, [0.2, 0.4, 0.6]), 0.0, ws_const.bounds())
        assert rep.max_ratio == 0.0
        assert rep.passed

    def test_bump_run_passes(self, bump_trig, bump_trig_grid, ws_trig):
        d, _ = bump_trig
        rep = diag.lipschitz_check(slices_at(bump_trig_grid, np.linspace(0.1, 1.0, 10)),
                                   d.e0, ws_trig.bounds())
        assert rep.passed
        assert rep.n_pairs == 45

    def test_needs_two_slices(self, bump_trig_grid, ws_trig):
        with pytest.raises(ValueError, match="two slices"):
            diag.lipschitz_check(slices_at(bump_trig_grid, [0.5]), 1.0, ws_trig.bounds())


class TestHolder:
    def test_zero_run_coefficient_zero(self, zero_grid):
        _, _, g = zero_grid
        rep = diag.holder_check([g], window=(0.2, 0.8, -0.5, 0.5))
        assert rep.coefficients == [0.0]
        assert rep.stable

    def test_deterministic_under_seed(self, bump_trig_grid):
        w = (0.1, 1.0, -1.0, 1.0)
        r1 = diag.holder_check([bump_trig_grid], w, seed=7)
        r2 = diag.holder_check([bump_trig_grid], w, seed=7)
        assert r1.coefficients == r2.coefficients


class TestWeakForm:
    def test_test_bump_derivatives(self):
        fn = diag.TestBump(0.5, 0.1, 0.3, 0.4)
        ts = np.linspace(0.25, 0.75, 7)
        xs = np.linspace(-0.2, 0.4, 7)
        h = 1e-6
        for t in ts:
            for x in xs:
                dt_num = (fn.value(t + h, x) - fn.value(t - h, x)) / (2 * h)
                dx_num = (fn.value(t, x + h) - fn.value(t, x - h)) / (2 * h)
                assert fn.dt(t, x)[0] == pytest.approx(float(dt_num[0]), abs=1e-6)
                assert fn.dx(t, x)[0] == pytest.approx(float(dx_num[0]), abs=1e-6)

    def test_zero_run(self, zero_grid):
        _, _, g = zero_grid
        fns = [diag.TestBump(0.5, 0.0, 0.3, 0.5)]
        assert diag.weak_residual(g, fns) == 0.0

    def test_residual_refines_first_order(self, bump_trig, ws_trig):
        _, bc = bump_trig
        fns = [diag.TestBump(0.3, 0.0, 0.2, 0.6), diag.TestBump(0.35, -0.4, 0.25, 0.4)]
        vals = []
        for h in (0.04, 0.02):
            g = solve_attached(bc, ws_trig, h, 0.7, pad=0.3)
            vals.append(diag.weak_residual(g, fns))
        assert vals[0] / vals[1] >= 1.8

    def test_support_validation(self, bump_trig_grid):
        with pytest.raises(ValueError, match="support exits"):
            diag.weak_residual(bump_trig_grid, [diag.TestBump(0.5, 0.0, 5.0, 0.5)])
        with pytest.raises(ValueError, match="support exits"):
            diag.weak_residual(bump_trig_grid, [diag.TestBump(0.5, 50.0, 0.2, 0.5)])

    def test_oracle_functional_comparable(self, bump_const, ws_const, bump_const_grid):
        # the same functional evaluated on FD output is also small
        d, _ = bump_const
        fn = [diag.TestBump(0.5, 0.0, 0.35, 0.8)]
        char_res = diag.weak_residual(bump_const_grid, fn)
        fd = cw.fd_solve(d, ws_const, cfl=0.6, T=1.0,
                         record_times=np.linspace(0, 1, 161))
        fd_res = diag.weak_residual_physical(fd.snapshots, ws_const, fn)
        assert fd_res < 100 * max(char_res, 1e-6)
        assert fd_res < 0.01 * d.e0


class TestBalanceLaws:
    def test_exact_linear_wave_residual_second_order(self, ws_const):
        # sampled exact solution of the linearized equation: the balance
        # residual is pure differencing truncation, so it refines at O(h^2)
        k = 2.0
        omega = np.sqrt(k * k + 0.5)
        A = 1e-3

        class Snap:
            def __init__(self, t, x):
                self.t = t
                self.x = x
                self.v = A * np.cos(k * x - omega * t)
                vt = A * omega * np.sin(k * x - omega * t)
                vx = -A * k * np.sin(k * x - omega * t)
                self.R = vt + vx
                self.S = vt - vx

        res = []
        for h in (4e-3, 2e-3):
            x = np.arange(-2, 2 + h / 2, h)
            states = [Snap(t, x) for t in (0.5 - h, 0.5, 0.5 + h)]
            res.append(diag.balance_residuals(states, ws_const))
        assert res[0][0] / res[1][0] >= 3.5
        assert res[0][1] / res[1][1] >= 3.5

    def test_fd_output_residual_decreases(self, ws_const):
        v0, v1 = cw.make_family("gaussian_bump", ws_const, amplitude=0.1,
                                width=0.5, support=1.2)
        vals = []
        for dx in (4e-3, 2e-3):
            d = cw.sample_initial(v0, v1, (-1.3, 1.3), dx, ws_const)
            fd = cw.fd_solve(d, ws_const, cfl=0.5, T=0.2,
                             record_times=[0.2 - 20 * dx, 0.2 - 10 * dx, 0.2])
            vals.append(diag.balance_residuals(fd.snapshots, ws_const))
        assert vals[1][0] < vals[0][0]
        assert vals[1][1] < vals[0][1]

    def test_validation(self, ws_const):
        with pytest.raises(ValueError, match="three"):
            diag.balance_residuals([], ws_const)
