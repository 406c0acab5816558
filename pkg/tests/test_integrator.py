import math

import numpy as np
import pytest

from foldatlas.algebra import Poly3, VectorField3
from foldatlas.errors import IntegrationFailure, PreconditionError
from foldatlas.foldfold import make_parameters, return_map_analysis
from foldatlas.integrator import (
    FlightStatus,
    IntegratorConfig,
    Mode,
    SegmentEnd,
    filippov_trajectory,
    fold_map_numeric,
    integrate_to_sigma,
    jacobian_numeric,
    return_map_numeric,
)
from foldatlas.system import Box, PiecewiseSystem, build_normal_form

CFG = IntegratorConfig()


def const_field(cx, cy, cz):
    return VectorField3(Poly3.constant(cx), Poly3.constant(cy), Poly3.constant(cz))


class TestIntegrateToSigma:
    def test_quadratic_arc_closed_form(self):
        # X = (-1, 1, -y): from (0, -0.1, 0) the arc returns at t = 0.2
        system = build_normal_form(-1.0, -1.0, 1.0, -1.0)
        res = integrate_to_sigma(system.X, (0.0, -0.1, 0.0), +1, CFG)
        assert res.status is FlightStatus.HIT_SIGMA
        assert res.time == pytest.approx(0.2, abs=1e-9)
        assert res.point[0] == pytest.approx(-0.2, abs=1e-8)
        assert res.point[1] == pytest.approx(0.1, abs=1e-8)
        assert abs(res.point[2]) <= CFG.event_tol

    def test_wrong_direction_no_return(self):
        system = build_normal_form(-1.0, -1.0, 1.0, -1.0)
        res = integrate_to_sigma(system.X, (0.0, 0.1, 0.0), +1, CFG)
        assert res.status is FlightStatus.NO_RETURN

    def test_monotone_field_never_returns(self):
        field = const_field(0.0, 0.0, 1.0)
        res = integrate_to_sigma(field, (0.0, 0.0, 0.0), +1, CFG)
        assert res.status in (FlightStatus.LEFT_BOX, FlightStatus.TIME_OUT)

    def test_off_surface_start_rejected(self):
        with pytest.raises(PreconditionError):
            integrate_to_sigma(const_field(0, 0, 1), (0.0, 0.0, 0.5), +1, CFG)


class TestFoldMap:
    def test_matches_analytic_formula(self):
        system = build_normal_form(-1.0, -1.0, 1.0, -1.0)
        image = fold_map_numeric(system, "X", (0.0, -0.1), CFG)
        assert image[0] == pytest.approx(-0.2, abs=1e-7)
        assert image[1] == pytest.approx(0.1, abs=1e-7)

    def test_fixed_on_tangency_line(self):
        system = build_normal_form(-1.0, -1.0, 1.0, -1.0)
        assert fold_map_numeric(system, "X", (0.3, 0.0), CFG) == (0.3, 0.0)

    def test_involution(self):
        system = build_normal_form(-1.0, -1.0, 1.0, -1.0)
        q = (0.05, -0.07)
        image = fold_map_numeric(system, "X", q, CFG)
        back = fold_map_numeric(system, "X", image, CFG)
        assert math.hypot(back[0] - q[0], back[1] - q[1]) <= 2e-7

    def test_involution_tight_sampled(self):
        # double application returns within 10x the event tolerance
        rng = np.random.default_rng(3)
        system = build_normal_form(-0.8, -1.2, 1.0, -1.0)
        worst = 0.0
        for _ in range(1000):
            q = (rng.uniform(-0.1, 0.1), rng.choice((-1, 1)) * rng.uniform(0.01, 0.1))
            image = fold_map_numeric(system, "X", q, CFG)
            back = fold_map_numeric(system, "X", image, CFG)
            worst = max(worst, math.hypot(back[0] - q[0], back[1] - q[1]))
        assert worst <= 10.0 * CFG.event_tol

    def test_visible_fold_fails(self):
        system = build_normal_form(0.5, 0.5, -1.0, 1.0)  # X fold visible
        with pytest.raises(IntegrationFailure):
            fold_map_numeric(system, "X", (0.0, -0.05), CFG)


class TestReturnMap:
    def test_linear_prediction(self):
        system = build_normal_form(-1.0, -1.0, 1.0, -1.0)
        analysis = return_map_analysis(make_parameters(-1.0, -1.0, 1.0, -1.0))
        q = (0.01, -0.01)
        image = return_map_numeric(system, q, CFG)
        predicted = analysis.matrix @ np.array(q)
        assert math.hypot(image[0] - predicted[0], image[1] - predicted[1]) <= 1e-5

    def test_origin_fixed(self):
        system = build_normal_form(-1.0, -1.0, 1.0, -1.0)
        image = return_map_numeric(system, (0.0, 0.0), CFG)
        assert math.hypot(*image) <= 10 * CFG.event_tol

    def test_iterated_growth_rate(self):
        # saddle (-2, -1, 1): expansion per full map is 3 + 2 sqrt(2)
        system = build_normal_form(-2.0, -1.0, 1.0, -1.0)
        analysis = return_map_analysis(make_parameters(-2.0, -1.0, 1.0, -1.0))
        lam = max(abs(v) for v in analysis.eigenvalues)
        v = analysis.v_expanding
        q = (1e-3 * v[0], 1e-3 * v[1])
        radii = [math.hypot(*q)]
        for _ in range(4):
            q = return_map_numeric(system, q, CFG)
            radii.append(math.hypot(*q))
        growth = [radii[i + 1] / radii[i] for i in range(4)]
        for g in growth:
            assert g == pytest.approx(lam, rel=2e-2)


class TestJacobian:
    def test_return_map_jacobian(self):
        system = build_normal_form(-1.0, -1.0, 0.5, -1.0)
        jac = jacobian_numeric(lambda q: return_map_numeric(system, q, CFG), (0.0, 0.0), 1e-3)
        assert np.max(np.abs(jac - np.array([[7.0, 2.0], [-4.0, -1.0]]))) <= 1e-4

    def test_fold_map_jacobian(self):
        system = build_normal_form(-1.0, -1.0, 1.0, -1.0)
        jac = jacobian_numeric(lambda q: fold_map_numeric(system, "X", q, CFG), (0.0, 0.0), 1e-3)
        assert np.max(np.abs(jac - np.array([[1.0, 2.0], [0.0, -1.0]]))) <= 1e-6

    def test_identity_map(self):
        jac = jacobian_numeric(lambda q: q, (0.3, -0.4), 1e-3)
        assert np.allclose(jac, np.eye(2), atol=1e-12)

    def test_grid_against_analytic(self):
        for a in (-2.0, -0.7, 1.3):
            for b in (-1.4, 0.9):
                for g in (0.5, 2.0):
                    system = build_normal_form(a, b, g, -1.0)
                    analysis = return_map_analysis(make_parameters(a, b, g, -1.0))
                    jac = jacobian_numeric(
                        lambda q: return_map_numeric(system, q, CFG), (0.0, 0.0), 1e-3
                    )
                    assert np.max(np.abs(jac - analysis.matrix)) <= max(1e-4, 10 * 1e-6)


class TestReversibility:
    def test_fold_map_exchanges_manifolds(self):
        # the X-fold map carries the expanding tangent line onto the
        # contracting one to second order
        a, b, g = -2.0, -1.0, 1.0
        system = build_normal_form(a, b, g, -1.0)
        analysis = return_map_analysis(make_parameters(a, b, g, -1.0))
        v_u = analysis.v_expanding
        v_s = analysis.v_contracting
        for r in (0.01, 0.02, 0.04):
            q = (r * v_u[0], r * v_u[1])
            w = fold_map_numeric(system, "X", q, CFG)
            dist = abs(v_s[0] * w[1] - v_s[1] * w[0])
            assert dist <= max(5.0 * r * r, 1e-9)


class TestTrajectory:
    def test_fall_and_slide(self):
        Z = PiecewiseSystem(const_field(1, 0, -1), const_field(0, 1, 1))
        traj = filippov_trajectory(Z, (0.0, 0.0, 0.5), 5.0, CFG)
        assert traj.segments[0].mode is Mode.FLOW_PLUS
        hit = traj.segments[0].points[-1]
        assert hit[0] == pytest.approx(0.5, abs=1e-9)
        assert abs(hit[2]) <= 1e-10
        assert traj.segments[1].mode is Mode.SLIDING
        sl = traj.segments[1]
        dt = sl.times[-1] - sl.times[0]
        assert sl.points[-1][0] - sl.points[0][0] == pytest.approx(0.5 * dt, rel=1e-9)
        assert np.max(np.abs(sl.points[:, 2])) == 0.0

    def test_crossing_alternation_matches_fold_maps(self):
        system = build_normal_form(-1.0, -1.0, 1.0, -1.0)
        q0 = (0.05, -0.04, 0.0)  # crossing: Xf = 0.04 > 0, Yf = 0.05 > 0
        traj = filippov_trajectory(system, q0, 10.0, CFG)
        hits = [seg.points[-1] for seg in traj.segments if seg.terminal is SegmentEnd.MODE_SWITCH]
        phi_x = fold_map_numeric(system, "X", (q0[0], q0[1]), CFG)
        assert hits[0][0] == pytest.approx(phi_x[0], abs=1e-8)
        assert hits[0][1] == pytest.approx(phi_x[1], abs=1e-8)
        phi_yx = fold_map_numeric(system, "Y", phi_x, CFG)
        assert hits[1][0] == pytest.approx(phi_yx[0], abs=1e-8)
        assert hits[1][1] == pytest.approx(phi_yx[1], abs=1e-8)

    def test_never_hits_sigma(self):
        Z = PiecewiseSystem(const_field(0, 0, 1), const_field(0, 1, 1))
        traj = filippov_trajectory(Z, (0.0, 0.0, 0.5), 2.0, CFG)
        assert traj.segments[-1].terminal in (SegmentEnd.LEFT_BOX, SegmentEnd.TIME_OUT)

    def test_unstable_sliding_start_flagged(self):
        system = build_normal_form(-1.0, -1.0, 1.0, -1.0)
        traj = filippov_trajectory(system, (-0.5, -0.5, 0.0), 2.0, CFG)
        assert traj.status == SegmentEnd.UNSTABLE_SLIDING.value

    def test_reverse_time_enters_unstable_sliding(self):
        system = build_normal_form(-1.0, -1.0, 1.0, -1.0)
        traj = filippov_trajectory(system, (-0.5, -0.5, 0.0), -1.0, CFG)
        modes = [seg.mode for seg in traj.segments]
        assert Mode.SLIDING in modes
        assert traj.total_time < 0

    def test_visible_fold_exit(self):
        X = VectorField3(Poly3.constant(0.0), Poly3.constant(-1.0), Poly3({(0, 1, 0): -1.0}))
        Z = PiecewiseSystem(X, const_field(0, 0, 1))
        traj = filippov_trajectory(Z, (0.0, 0.5, 0.0), 3.0, CFG)
        assert traj.segments[0].mode is Mode.SLIDING
        assert traj.segments[0].terminal is SegmentEnd.MODE_SWITCH
        assert traj.segments[1].mode is Mode.FLOW_PLUS

    def test_mode_consistent_with_z_sign(self):
        system = build_normal_form(-2.0, -1.0, 1.0, -1.0)
        traj = filippov_trajectory(system, (0.05, -0.04, 0.0), 5.0, CFG)
        for seg in traj.segments:
            z = seg.points[:, 2]
            if seg.mode is Mode.FLOW_PLUS:
                assert np.min(z) >= -CFG.event_tol * 10
            elif seg.mode is Mode.FLOW_MINUS:
                assert np.max(z) <= CFG.event_tol * 10
            else:
                assert np.max(np.abs(z)) == 0.0

    def test_junction_continuity(self):
        system = build_normal_form(-2.0, -1.0, 1.0, -1.0)
        traj = filippov_trajectory(system, (0.05, -0.04, 0.0), 5.0, CFG)
        for prev, nxt in zip(traj.segments, traj.segments[1:]):
            gap = np.linalg.norm(prev.points[-1] - nxt.points[0])
            assert gap <= 10 * CFG.event_tol

    def test_sliding_into_t_singularity_terminates(self):
        # inside RE1 the sliding orbit reaches the two-fold in finite time
        system = build_normal_form(-2.0, -1.0, 1.0, -1.0)
        traj = filippov_trajectory(system, (0.3, 0.3, 0.0), 10.0, CFG)
        assert traj.segments[0].mode is Mode.SLIDING
        assert traj.segments[-1].terminal in (
            SegmentEnd.REACHED_TANGENCY,
            SegmentEnd.DENOMINATOR_BLOWUP,
        )
        end = traj.segments[-1].points[-1]
        assert math.hypot(end[0], end[1]) <= 1e-3


class TestConfig:
    def test_positive_validation(self):
        with pytest.raises(PreconditionError):
            IntegratorConfig(rel_tol=-1.0)
        with pytest.raises(PreconditionError):
            IntegratorConfig(max_time=0.0)

    def test_custom_box(self):
        cfg = IntegratorConfig(box=Box(-2, 2, -2, 2, -2, 2))
        Z = PiecewiseSystem(const_field(1, 0, -1), const_field(0, 1, 1))
        traj = filippov_trajectory(Z, (0.0, 0.0, 0.5), 50.0, cfg)
        end = traj.segments[-1].points[-1]
        assert traj.segments[-1].terminal is SegmentEnd.LEFT_BOX
        assert max(abs(end[0]), abs(end[1])) > 2.0
