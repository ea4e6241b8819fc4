"""Scalar time dependence ``E(t), F(t), G(t)`` of the damped-oscillator solution."""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ModelParams:
    """Loss and gain rates ``mu > nu >= 0`` with the oscillator frequency ``omega``."""

    mu: float
    nu: float
    omega: float = 0.0

    def __post_init__(self):
        for name in ("mu", "nu", "omega"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not self.mu > self.nu >= 0:
            raise ValueError(f"parameters violate μ > ν ≥ 0 (mu={self.mu}, nu={self.nu})")

    @classmethod
    def unchecked(cls, mu, nu, omega=0.0):
        """Bypass the ``mu > nu >= 0`` invariant (test-only degenerate rates)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "mu", float(mu))
        object.__setattr__(obj, "nu", float(nu))
        object.__setattr__(obj, "omega", float(omega))
        return obj

    @property
    def kappa(self):
        return self.mu - self.nu


@dataclass(frozen=True)
class Coefficients:
    t: float
    E: float
    F: float
    G: float
    log_F: float

    @property
    def one_minus_G(self):
        return 1.0 - self.G


def coefficients(p: ModelParams, t: float) -> Coefficients:
    """Evaluate ``E, F, G`` at time ``t >= 0``.

    With ``x = (mu - nu) t / 2`` and ``s = 1 - exp(-2x)`` the closed forms
    factor as ``F = exp(x) (1 + nu s / (mu - nu))``,
    ``G = nu s / ((mu - nu) + nu s)`` and ``E = mu s / ((mu - nu) + nu s)``,
    which avoids cosh/sinh overflow.  ``F`` is ``inf`` once ``exp(x)``
    overflows; ``log_F`` stays finite.
    """
    t = float(t)
    if not t >= 0:
        raise ValueError(f"time must be >= 0 (got {t})")
    k = p.mu - p.nu
    x = 0.5 * k * t
    s = -math.expm1(-2.0 * x)
    denom = k + p.nu * s
    E = p.mu * s / denom
    G = p.nu * s / denom
    log_F = x + math.log1p(p.nu * s / k)
    F = math.exp(log_F) if log_F < 709.0 else math.inf
    return Coefficients(t, E, F, G, log_F)


def g_limit(p: ModelParams) -> float:
    """Supremum of ``G(t)``, reached as ``t -> inf``."""
    return p.nu / p.mu
