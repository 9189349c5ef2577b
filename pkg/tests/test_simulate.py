"""Scenario runner, transmission ratios, and sweep/grid evaluators."""

import math

import numpy as np
import pytest

from twistwinch import (AllocationPolicy, DomainError, GearTrain,
                        LoadCondition, ParameterError, Phase, Scenario,
                        ScenarioAborted, StringParams, WinchGeometry,
                        force_table, ratio_map, run, solve_total_contraction,
                        transmission_ratio, velocity_sweep)

from oracles import bisect_axial_length, oracle_fold_twist

RIGID = StringParams(0.5, 0.001)
WINCH = WinchGeometry(0.005)
NO_LOAD = LoadCondition()
TRAIN = GearTrain()
POLICY = AllocationPolicy.winch_then_twist(0.050)


def scenario(phases, **kwargs):
    defaults = dict(params=RIGID, winch=WINCH, train=TRAIN, load=NO_LOAD,
                    policy=POLICY, phases=tuple(phases), dt=0.001)
    defaults.update(kwargs)
    return Scenario(**defaults)


class TestRun:
    def test_hold_is_constant(self):
        trace = run(scenario([Phase.hold(0.05)]))
        values = {s.total_contraction for s in trace}
        assert values == {0.0}
        assert len(trace) == 51  # initial sample + 50 steps

    def test_pure_winch_linear(self):
        rate = 2.0
        trace = run(scenario([Phase.rates(0.5, phi_dot=rate)]))
        for s in trace:
            assert abs(s.total_contraction - WINCH.winch_radius * rate * s.t) < 1e-12

    def test_motor_angles_consistent(self):
        trace = run(scenario([Phase.rates(0.2, theta_dot=3.0, phi_dot=1.0)],
                             initial_twist=20.0))
        from twistwinch import effective_angles, MotorAngles
        for s in trace[:: len(trace) // 7 or 1]:
            phi, theta = effective_angles(MotorAngles(s.theta1, s.theta2), TRAIN)
            assert phi == pytest.approx(s.phi_eff, abs=1e-12)
            assert theta == pytest.approx(s.theta_eff, abs=1e-12)

    def test_staged_shape(self):
        trace = run(scenario([
            Phase.rates(2.0, phi_dot=2.26),
            Phase.hold(0.2),
            Phase.rates(10.0, theta_dot=5.0),
        ], dt=0.01))
        t_winch_end, t_hold_end = 2.0, 2.2
        winch_seg = [s for s in trace if s.t <= t_winch_end + 1e-12]
        hold_seg = [s for s in trace if t_winch_end - 1e-12 < s.t <= t_hold_end + 1e-12]
        twist_seg = [s for s in trace if s.t > t_hold_end + 1e-12]

        # winch segment: linear ramp
        slope = WINCH.winch_radius * 2.26
        for s in winch_seg:
            assert s.total_contraction == pytest.approx(slope * s.t, abs=1e-12)
        # hold segment: plateau
        plateau = hold_seg[0].total_contraction
        for s in hold_seg:
            assert s.total_contraction == plateau
        # twist segment: increasing and convex in time (constant twist rate)
        dx = [s.total_contraction for s in twist_seg]
        first = np.diff(dx)
        assert np.all(first > 0)
        second = np.diff(first)
        assert np.all(second > -1e-15)
        assert np.max(second) > 0

    def test_trace_consistent_with_solver(self):
        trace = run(scenario([
            Phase.rates(1.0, phi_dot=2.0),
            Phase.rates(2.0, theta_dot=10.0),
        ], dt=0.01))
        for s in trace[:: len(trace) // 29 or 1]:
            st = solve_total_contraction(RIGID, WINCH, NO_LOAD, s.theta_eff, s.phi_eff)
            assert abs(st.total_contraction - s.total_contraction) < 1e-9

    def test_time_reversal(self):
        fwd_back = scenario([
            Phase.rates(1.0, theta_dot=40.0),
            Phase.rates(1.0, theta_dot=-40.0),
        ], dt=0.001, initial_twist=30.0, initial_winch=2.0)
        trace = run(fwd_back)
        assert abs(trace[-1].total_contraction - trace[0].total_contraction) < 1e-9
        assert abs(trace[-1].theta_eff - trace[0].theta_eff) < 1e-9

    def test_dt_refinement(self):
        # Velocity-tracked phase: the explicit integrator's error must fall
        # below 0.1% when dt halves.
        base = dict(params=RIGID, winch=WINCH, train=TRAIN, load=NO_LOAD,
                    policy=AllocationPolicy.proportional(0.5),
                    phases=(Phase.velocity(0.5, 0.004),),
                    initial_twist=30.0)
        coarse = run(Scenario(dt=0.002, **base))[-1].total_contraction
        fine = run(Scenario(dt=0.001, **base))[-1].total_contraction
        assert abs(fine - coarse) / abs(fine) < 0.001

    def test_velocity_phase_tracks_request(self):
        trace = run(scenario([Phase.velocity(1.0, 0.005)], dt=0.001))
        # pure-winch regime of the policy: exact tracking
        assert trace[-1].total_contraction == pytest.approx(0.005, rel=1e-9)

    def test_overtwist_aborts_with_partial_trace(self):
        sc = scenario([Phase.rates(60.0, theta_dot=10.0)], dt=0.01)
        with pytest.raises(ScenarioAborted) as excinfo:
            run(sc)
        aborted = excinfo.value
        assert isinstance(aborted.cause, DomainError)
        assert len(aborted.samples) > 100
        assert aborted.t > 0.0
        # the partial trace stops inside the valid domain
        last = aborted.samples[-1]
        assert last.theta_eff < oracle_fold_twist(0.5, 0.001)

    def test_scenario_validation(self):
        with pytest.raises(ParameterError):
            scenario([])
        with pytest.raises(ParameterError):
            scenario([Phase.hold(1.0)], dt=0.0)
        with pytest.raises(ParameterError):
            Phase.hold(-1.0)
        with pytest.raises(ParameterError):
            Phase("spin", 1.0)


class TestTransmissionRatio:
    def state(self, theta, phi=0.0):
        return solve_total_contraction(RIGID, WINCH, NO_LOAD, theta, phi)

    def test_twist_ratio_vanishes_at_zero_twist(self):
        tw, _ = transmission_ratio(self.state(0.0), WINCH, RIGID)
        assert abs(tw) < 1e-8

    def test_winch_ratio_is_drum_radius(self):
        for theta, phi in [(0.0, 0.0), (50.0, 3.0), (200.0, 10.0)]:
            _, wn = transmission_ratio(self.state(theta, phi), WINCH, RIGID)
            assert abs(wn - WINCH.winch_radius) / WINCH.winch_radius < 1e-6

    def test_twist_ratio_strictly_increasing(self):
        thetas = np.linspace(0.0, 250.0, 26)
        ratios = [transmission_ratio(self.state(t), WINCH, RIGID)[0]
                  for t in thetas]
        assert all(b > a for a, b in zip(ratios, ratios[1:]))

    def test_twist_ratio_matches_oracle_slope(self):
        # central difference of the oracle displacement at theta = 150
        h = 1e-4
        lc = 0.5
        hi = lc - bisect_axial_length(lc, 0.001, 150.0 + h)
        lo = lc - bisect_axial_length(lc, 0.001, 150.0 - h)
        expected = (hi - lo) / (2 * h)
        tw, _ = transmission_ratio(self.state(150.0), WINCH, RIGID)
        assert tw == pytest.approx(expected, rel=1e-6)


class TestVelocitySweep:
    def test_winch_sweep_exact(self):
        base = scenario([Phase.hold(0.5)])
        rates = [0.20, 0.5, 1.0, 2.01]
        points = velocity_sweep(base, "winch", rates, duration=0.5)
        for p, rate in zip(points, rates):
            assert p.rate == rate
            assert abs(p.x_dot - WINCH.winch_radius * rate) < 1e-12

    def test_twist_sweep_matches_oracle(self):
        theta0, duration = 60.0, 0.5
        base = scenario([Phase.hold(duration)], initial_twist=theta0)
        rates = [0.40, 1.0, 2.0, 4.02]
        points = velocity_sweep(base, "twist", rates, duration=duration)
        for p, rate in zip(points, rates):
            start = 0.5 - bisect_axial_length(0.5, 0.001, theta0)
            end = 0.5 - bisect_axial_length(0.5, 0.001, theta0 + rate * duration)
            assert p.x_dot == pytest.approx((end - start) / duration, abs=1e-8)

    def test_twist_sweep_near_proportional(self):
        base = scenario([Phase.hold(0.5)], initial_twist=60.0)
        rates = [0.40, 4.02]
        points = velocity_sweep(base, "twist", rates, duration=0.5)
        gains = [p.x_dot / p.rate for p in points]
        assert gains[1] == pytest.approx(gains[0], rel=0.05)

    def test_bad_kind(self):
        with pytest.raises(ParameterError):
            velocity_sweep(scenario([Phase.hold(0.1)]), "spin", [1.0])


class TestGrids:
    def test_force_table_cross_grid(self):
        elastic = StringParams(0.4, 0.001, stiffness=60_000.0)
        rows = force_table(elastic, WINCH, 0.4, [0.0, 150.0, 300.0],
                           [0.0, 0.08, 0.16])
        assert len(rows) == 9
        by_key = {(r.theta, r.tau_w): r.breakdown for r in rows}
        assert by_key[(0.0, 0.0)].f_total == 0.0
        assert by_key[(300.0, 0.0)].f_twist == pytest.approx(3600.0, rel=1e-12)
        assert by_key[(0.0, 0.16)].f_twist == 0.0
        for r in rows:
            assert r.breakdown.f_total == r.breakdown.f_twist + r.breakdown.f_winch

    def test_ratio_map_grid(self):
        rows = ratio_map(RIGID, WINCH, NO_LOAD, [0.0, 100.0, 200.0], [0.0, 10.0])
        assert len(rows) == 6
        for r in rows:
            assert abs(r.ratio_winch - WINCH.winch_radius) / WINCH.winch_radius < 1e-6
        per_phi = {phi: sorted((r.theta_eff, r.ratio_twist) for r in rows
                               if r.phi_eff == phi) for phi in (0.0, 10.0)}
        for curve in per_phi.values():
            ratios = [v for _, v in curve]
            assert ratios[0] < ratios[1] < ratios[2]
        # deeper winch (shorter contracted length) raises the twist gain
        assert per_phi[10.0][2][1] > per_phi[0.0][2][1]
