"""Gear-train algebra: spec examples, roundtrips, linearity, Jacobian."""

import math

import numpy as np
import pytest

from twistwinch import (EffectiveRates, GearTrain, MotorAngles, ParameterError,
                        effective_angles, effective_rates, motor_angles,
                        motor_velocities)

TWO_PI = 2.0 * math.pi


def random_train(rng):
    return GearTrain(bevel_count=int(rng.integers(1, 5)),
                     bevel_ratio=rng.uniform(0.5, 10.0),
                     turret_count=int(rng.integers(1, 5)),
                     turret_ratio=rng.uniform(0.5, 10.0))


def test_zero_identity():
    phi, theta = effective_angles(MotorAngles(0.0, 0.0), GearTrain())
    assert phi == 0.0 and theta == 0.0


def test_drive_shaft_only():
    train = GearTrain(bevel_count=2, bevel_ratio=2.0)
    phi, theta = effective_angles(MotorAngles(TWO_PI, 0.0), train)
    assert theta == 0.0
    assert phi == pytest.approx(-math.pi, abs=1e-15)


def test_turret_rotation_couples_into_winch():
    train = GearTrain(bevel_count=2, bevel_ratio=2.0,
                      turret_count=2, turret_ratio=2.0)
    phi, theta = effective_angles(MotorAngles(0.0, 2 * TWO_PI), train)
    assert theta == pytest.approx(-TWO_PI, abs=1e-15)
    assert phi == pytest.approx(-math.pi, abs=1e-15)


def test_inverse_example():
    train = GearTrain(bevel_count=2, bevel_ratio=2.0)
    motors = motor_angles(-math.pi, 0.0, train)
    assert motors.theta1 == pytest.approx(TWO_PI, abs=1e-15)
    assert motors.theta2 == 0.0


def test_motor_velocity_example():
    train = GearTrain(bevel_count=2, bevel_ratio=2.0)
    theta1_dot, theta2_dot = motor_velocities(
        EffectiveRates(phi_dot_eff=1.0, theta_dot_eff=0.0), train)
    assert theta1_dot == pytest.approx(-2.0, abs=1e-15)
    assert theta2_dot == 0.0


def test_angle_roundtrip_random():
    rng = np.random.default_rng(101)
    for _ in range(1000):
        train = random_train(rng)
        phi, theta = rng.uniform(-50.0, 50.0, size=2)
        back_phi, back_theta = effective_angles(motor_angles(phi, theta, train), train)
        assert abs(back_phi - phi) < 1e-12
        assert abs(back_theta - theta) < 1e-12


def test_rate_roundtrip_random():
    rng = np.random.default_rng(102)
    for _ in range(1000):
        train = random_train(rng)
        rates = EffectiveRates(*rng.uniform(-20.0, 20.0, size=2))
        back = effective_rates(*motor_velocities(rates, train), train)
        assert abs(back.phi_dot_eff - rates.phi_dot_eff) < 1e-12
        assert abs(back.theta_dot_eff - rates.theta_dot_eff) < 1e-12


def test_superposition():
    rng = np.random.default_rng(103)
    train = random_train(rng)
    a = MotorAngles(*rng.uniform(-10, 10, size=2))
    b = MotorAngles(*rng.uniform(-10, 10, size=2))
    summed = MotorAngles(a.theta1 + b.theta1, a.theta2 + b.theta2)
    pa, ta = effective_angles(a, train)
    pb, tb = effective_angles(b, train)
    ps, ts = effective_angles(summed, train)
    assert ps == pytest.approx(pa + pb, abs=1e-12)
    assert ts == pytest.approx(ta + tb, abs=1e-12)


def test_velocity_map_is_angle_map_derivative():
    # Finite difference of the angle map along a motor-rate ramp must match
    # the rate map (the Jacobian is constant).
    rng = np.random.default_rng(104)
    h = 1e-6
    for _ in range(50):
        train = random_train(rng)
        m0 = rng.uniform(-10, 10, size=2)
        mdot = rng.uniform(-5, 5, size=2)
        p0, t0 = effective_angles(MotorAngles(*m0), train)
        p1, t1 = effective_angles(MotorAngles(*(m0 + h * mdot)), train)
        rates = effective_rates(mdot[0], mdot[1], train)
        assert (p1 - p0) / h == pytest.approx(rates.phi_dot_eff, abs=1e-9, rel=1e-6)
        assert (t1 - t0) / h == pytest.approx(rates.theta_dot_eff, abs=1e-9, rel=1e-6)


def test_invalid_train_rejected():
    with pytest.raises(ParameterError):
        GearTrain(bevel_count=0)
    with pytest.raises(ParameterError):
        GearTrain(bevel_ratio=-2.0)
    with pytest.raises(ParameterError):
        GearTrain(turret_ratio=0.0)
