"""Classical underdamped oscillator ``x'' + gamma x' + omega^2 x = 0``."""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np


@dataclass(frozen=True)
class ClassicalParams:
    gamma_c: float
    omega: float
    x0: float = 1.0
    v0: float = 0.0

    def __post_init__(self):
        if not self.gamma_c >= 0:
            raise ValueError(f"damping must be >= 0 (got {self.gamma_c})")
        if not self.omega > self.gamma_c / 2:
            raise ValueError(
                f"only the underdamped regime omega > gamma/2 is supported "
                f"(omega={self.omega}, gamma={self.gamma_c})"
            )

    @property
    def damped_frequency(self):
        return math.sqrt(self.omega**2 - 0.25 * self.gamma_c**2)


def _position(cp, t, freq, exp=math.exp, cos=math.cos, sin=math.sin):
    half = cp.gamma_c / 2
    return exp(-half * t) * (cp.x0 * cos(freq * t) + (cp.v0 + half * cp.x0) / freq * sin(freq * t))


def classical_solution(cp: ClassicalParams, t):
    """Position ``x(t)`` from the initial position and velocity."""
    if t < 0:
        raise ValueError("time must be >= 0")
    return _position(cp, t, cp.damped_frequency)


def classical_velocity(cp: ClassicalParams, t):
    half = cp.gamma_c / 2
    w = cp.damped_frequency
    b = (cp.v0 + half * cp.x0) / w
    e = math.exp(-half * t)
    c, s = math.cos(w * t), math.sin(w * t)
    return e * (-half * (cp.x0 * c + b * s) + w * (-cp.x0 * s + b * c))


def small_damping_approx(cp: ClassicalParams, t):
    """Same envelope, oscillating at the bare ``omega`` instead of the damped frequency."""
    return _position(cp, t, cp.omega)


def energy(cp: ClassicalParams, t):
    return 0.5 * (classical_velocity(cp, t) ** 2 + cp.omega**2 * classical_solution(cp, t) ** 2)


def integrate_ode(cp: ClassicalParams, t_max, h=1e-3):
    """Fixed-step RK4 on ``(x, v)``; returns times and positions."""
    steps = max(1, math.ceil(t_max / h - 1e-12))
    dt = t_max / steps
    g, w2 = cp.gamma_c, cp.omega**2

    def f(y):
        return np.array([y[1], -g * y[1] - w2 * y[0]])

    y = np.array([cp.x0, cp.v0], dtype=float)
    xs = np.empty(steps + 1)
    xs[0] = y[0]
    for i in range(steps):
        k1 = f(y)
        k2 = f(y + 0.5 * dt * k1)
        k3 = f(y + 0.5 * dt * k2)
        k4 = f(y + dt * k3)
        y = y + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        xs[i + 1] = y[0]
    return np.linspace(0.0, steps * dt, steps + 1), xs


def ode_residual(cp: ClassicalParams, t, h=1e-5, dps=40):
    """``|x'' + gamma x' + omega^2 x|`` by central differences on a 40-digit evaluation."""
    with mpmath.workdps(dps):
        t = mpmath.mpf(t)
        h = mpmath.mpf(h)
        freq = mpmath.sqrt(mpmath.mpf(cp.omega) ** 2 - mpmath.mpf(cp.gamma_c) ** 2 / 4)
        xm, x0, xp = (_position(cp, s, freq, mpmath.exp, mpmath.cos, mpmath.sin) for s in (t - h, t, t + h))
        acc = (xp - 2 * x0 + xm) / h**2
        vel = (xp - xm) / (2 * h)
        return float(abs(acc + cp.gamma_c * vel + cp.omega**2 * x0))
