import csv
import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

import starphase as sp
from starphase.trajectory import IntegratorConfig

# scipy DOP853 oracle values (rtol 1e-11), frozen
ORACLE_MAX_X = {
    "stiff": 0.5436236409201184,
    "nonrel": 2.5175513178116042,
    "kappa": 0.4926389503760826,
    "scaled": 0.0216300974122662,
}

X_NONREL_BOUND = 2.0 + 2.0 * math.sqrt(2.0 - math.log(3.0))  # 3.8988288...


def scipy_shoot(m, eps=1e-6, radius=1e-8):
    def rhs(t, s):
        x, y = s
        return [y - x, float(m.a(x)) * y - float(m.b(x)) * y * y]

    def near(t, s):
        return math.hypot(s[0] - m.z, s[1] - m.z) - radius
    near.terminal = True
    near.direction = -1

    return solve_ivp(rhs, (0.0, 200.0), [eps, (m.a0 + 1) * eps],
                     rtol=1e-11, atol=1e-13, method="DOP853",
                     events=near, dense_output=True, max_step=0.5)


class TestShoot:
    def test_converges_for_all_families(self, trajectories):
        for name, traj in trajectories.items():
            assert traj.converged, name
            assert traj.status.startswith("converged")

    @pytest.mark.parametrize("name", list(ORACLE_MAX_X))
    def test_max_x_matches_scipy_oracle(self, trajectories, name):
        assert trajectories[name].max_x == pytest.approx(
            ORACLE_MAX_X[name], abs=5e-8)

    def test_stiff_arrives_at_interior_point(self, trajectories):
        x, y = trajectories["stiff"].final_state
        assert math.hypot(x - 0.5, y - 0.5) < 1e-6

    def test_stiff_max_x_in_published_window(self, trajectories):
        assert 0.53 <= trajectories["stiff"].max_x <= 0.57

    def test_nonrel_arrives_and_respects_bound(self, trajectories):
        traj = trajectories["nonrel"]
        x, y = traj.final_state
        assert math.hypot(x - 2.0, y - 2.0) < 1e-6
        assert traj.max_x < X_NONREL_BOUND

    def test_max_x_below_analytic_bound_all_families(self, models,
                                                     trajectories):
        for name, traj in trajectories.items():
            rep = sp.bound_X(models[name])
            assert traj.max_x < rep.X_numeric, name

    def test_samples_strictly_increasing(self, trajectories):
        for traj in trajectories.values():
            assert np.all(np.diff(traj.t) > 0.0)

    def test_launch_offset_robustness(self, models):
        m = models["stiff"]
        a = sp.shoot_heteroclinic(m, IntegratorConfig(eps_start=1e-6))
        b = sp.shoot_heteroclinic(m, IntegratorConfig(eps_start=5e-7))
        assert abs(a.max_x - b.max_x) < 1e-4

    def test_rtol_halving_stability(self, models):
        m = models["stiff"]
        a = sp.shoot_heteroclinic(m, IntegratorConfig(rel_tol=1e-10))
        b = sp.shoot_heteroclinic(m, IntegratorConfig(rel_tol=5e-11))
        assert abs(a.max_x - b.max_x) < 1e-6

    def test_stays_below_unstable_tangent_line(self, trajectories):
        for name, traj in trajectories.items():
            slope = traj.model.a0 + 1.0
            gap = traj.y - slope * traj.x
            assert float(np.max(gap)) <= 1e-12, name

    def test_endpoint_against_scipy(self, models, trajectories):
        sol = scipy_shoot(models["stiff"])
        mine = trajectories["stiff"]
        # both reach the attractor; compare the refined peak
        assert mine.max_x == pytest.approx(
            float(np.max(sol.sol(np.linspace(0, sol.t[-1], 100001))[0])),
            abs=1e-6)

    def test_time_cap_reported(self, models):
        traj = sp.shoot_heteroclinic(models["stiff"],
                                     IntegratorConfig(max_time=2.0))
        assert not traj.converged
        assert traj.status == "max_time"

    def test_time_reversal_retraces_orbit(self, models, trajectories):
        # integrate backward from 60% of the way in; the backward orbit
        # must stay within 1e-3 of the recorded forward polyline
        from starphase import integrate

        m = models["stiff"]
        traj = trajectories["stiff"]
        k = int(np.searchsorted(traj.t, 0.6 * traj.t[-1]))
        state = np.array([traj.x[k], traj.y[k]])
        x_floor = max(traj.x[2], 1e-5)

        def back_field(t, s):
            x, y = s
            return np.array([-(y - x),
                             -(float(m.a(x)) * y - float(m.b(x)) * y * y)])

        sol = integrate.integrate_adaptive(
            back_field, 0.0, state, traj.t[k] - traj.t[0],
            rtol=1e-10, atol=1e-12, stop=lambda t, s: s[0] <= x_floor)
        pts = sol.y
        fwd = np.column_stack([traj.x, traj.y])
        worst = 0.0
        for p in pts[1:]:
            d = _point_polyline_distance(p, fwd)
            worst = max(worst, d)
        assert worst < 1e-3

    def test_csv_export(self, trajectories, tmp_path):
        path = tmp_path / "orbit.csv"
        traj = trajectories["stiff"]
        traj.to_csv(path)
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "x", "y", "V"]
        assert len(rows) == 1 + traj.t.size
        assert float(rows[1][1]) == traj.x[0]
        assert float(rows[-1][3]) == traj.V[-1]

    def test_dict_export(self, trajectories):
        doc = trajectories["stiff"].to_dict()
        assert doc["converged"] is True
        assert len(doc["samples"]) == trajectories["stiff"].t.size


def _point_polyline_distance(p, poly):
    a = poly[:-1]
    b = poly[1:]
    ab = b - a
    ap = p - a
    denom = np.einsum("ij,ij->i", ab, ab)
    denom[denom == 0.0] = 1.0
    t = np.clip(np.einsum("ij,ij->i", ap, ab) / denom, 0.0, 1.0)
    proj = a + t[:, None] * ab
    return float(np.min(np.hypot(*(p - proj).T)))


class TestMonotone:
    def test_v_nonincreasing_all_families(self, trajectories):
        for name, traj in trajectories.items():
            assert sp.verify_lyapunov_monotone(traj) <= 1e-9, name

    def test_single_sample_returns_zero(self, trajectories):
        t = trajectories["stiff"]
        single = sp.Trajectory(model=t.model, t=t.t[:1], x=t.x[:1],
                               y=t.y[:1], V=t.V[:1], max_x=float(t.x[0]),
                               converged=False, status="max_steps", steps=0)
        assert sp.verify_lyapunov_monotone(single) == 0.0

    def test_reversed_input_rejected(self, trajectories):
        t = trajectories["stiff"]
        rev = sp.Trajectory(model=t.model, t=t.t[::-1], x=t.x[::-1],
                            y=t.y[::-1], V=t.V[::-1], max_x=t.max_x,
                            converged=True, status=t.status, steps=t.steps)
        with pytest.raises(ValueError):
            sp.verify_lyapunov_monotone(rev)

    def test_empty_rejected(self, trajectories):
        t = trajectories["stiff"]
        empty = sp.Trajectory(model=t.model, t=t.t[:0], x=t.x[:0],
                              y=t.y[:0], V=t.V[:0], max_x=0.0,
                              converged=False, status="max_steps", steps=0)
        with pytest.raises(ValueError):
            sp.verify_lyapunov_monotone(empty)


class TestTrapRegion:
    def test_all_families_pass(self, each_model):
        rep = sp.check_trap_region(each_model, 1000)
        assert rep.passed
        assert rep.line_margin <= 1e-9
        assert rep.diagonal_min >= -1e-12
        assert rep.violation is None

    def test_nonrel_isocline_skipped(self, models):
        rep = sp.check_trap_region(models["nonrel"], 500)
        assert rep.isocline_monotone is None

    def test_relativistic_isocline_monotone(self, models):
        for name in ("stiff", "kappa", "scaled"):
            rep = sp.check_trap_region(models[name], 500)
            assert rep.isocline_monotone is True, name

    def test_line_margin_tight_at_origin(self, models):
        # dy/dx -> a0 + 1 as x -> 0 on the tangent line: equality margin
        rep = sp.check_trap_region(models["nonrel"], 2000)
        assert -1e-2 < rep.line_margin <= 1e-9

    def test_diagonal_stationary_at_z(self, each_model):
        dx, dy = sp.eval_field(each_model, each_model.z, each_model.z)
        assert dx == 0.0
        assert abs(dy) < 1e-15


class TestIsocline:
    def test_stiff_values(self, models):
        m = models["stiff"]
        assert sp.isocline_x(m, 0.5) == pytest.approx(0.5, abs=1e-12)
        assert sp.isocline_x(m, 1.0) == pytest.approx(1.0 / 3.0, abs=1e-12)
        assert sp.isocline_x(m, 0.0) == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_maps_interval_reversing_order(self, models):
        m = models["kappa"]
        ys = np.linspace(0.0, (m.a0 + 1.0) * m.w, 41)
        xs = [sp.isocline_x(m, y) for y in ys]
        assert xs[0] == pytest.approx(m.x0, abs=1e-10)
        assert xs[-1] == pytest.approx(m.w, abs=1e-10)
        assert np.all(np.diff(xs) < 1e-12)

    def test_degenerate_family_rejected(self, models):
        with pytest.raises(sp.DomainError):
            sp.isocline_x(models["nonrel"], 1.0)

    def test_out_of_range_rejected(self, models):
        m = models["stiff"]
        with pytest.raises(sp.DomainError):
            sp.isocline_x(m, 1.5)
        with pytest.raises(sp.DomainError):
            sp.isocline_x(m, -0.1)


class TestConfig:
    @pytest.mark.parametrize("field,value", [
        ("eps_start", 0.0), ("rel_tol", -1e-9), ("converge_radius", 0.0),
        ("max_time", -1.0), ("max_steps", 0),
    ])
    def test_positivity_validation(self, field, value):
        with pytest.raises(ValueError):
            IntegratorConfig(**{field: value})
