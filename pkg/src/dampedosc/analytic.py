"""Closed-form and series solutions of the damped-oscillator master equation.

Every routine returns a :class:`~dampedosc.fock.DensityMatrix` whose
``trace_dev`` is the deviation of the raw trace from 1.  Results are
renormalized only when that deviation is below ``trunc_tol``; otherwise a
:class:`~dampedosc.fock.TruncationError` asks the caller for a larger ``D``.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from . import oracle
from .coeffs import ModelParams, coefficients
from .disentangle import GaussianExponentParams, disentangled_product, padded_dim
from .fock import (
    DensityMatrix,
    StatePrep,
    TruncationError,
    annihilation,
    as_matrix,
    coherent_state,
    matrix_exp,
    number_operator,
)
from .observables import trace_distance

TRUNC_TOL = 1e-8
# below t_min = T_MIN_SCALE / (mu - nu) the log G(t) in the closed form is not used
T_MIN_SCALE = 1e-8


def _finish(rho, trunc_tol, meta=None):
    tr = complex(np.trace(rho))
    dev = abs(tr - 1.0)
    if dev > trunc_tol:
        raise TruncationError(f"trace deviates from 1 by {dev:.3e} (> {trunc_tol:.1e}); increase D")
    return DensityMatrix(rho / tr.real, dev, meta or {})


def lowering_sum(rho, E):
    """``sum_m E^m / m! a^m rho (a^dag)^m``, exact in ``D`` levels."""
    a = annihilation(rho.shape[0])
    ad = a.conj().T
    acc = rho.astype(complex)
    term = acc
    for m in range(1, rho.shape[0]):
        term = (E / m) * (a @ term @ ad)
        acc = acc + term
    return acc


def raising_sum(rho, G):
    """``sum_n G^n / n! (a^dag)^n rho a^n``; weight beyond level ``D - 1`` is dropped."""
    a = annihilation(rho.shape[0])
    ad = a.conj().T
    acc = rho.astype(complex)
    term = acc
    for n in range(1, rho.shape[0]):
        term = (G / n) * (ad @ term @ a)
        acc = acc + term
    return acc


def conjugate_by_number(rho, gamma):
    """``e^{gamma N} rho e^{conj(gamma) N}`` as row and column scaling."""
    scale = np.exp(complex(gamma) * np.arange(rho.shape[0]))
    return scale[:, None] * rho * scale.conj()[None, :]


def series_rho(p: ModelParams, rho0, t: float, trunc_tol=TRUNC_TOL) -> DensityMatrix:
    """Evaluate the general series solution for an arbitrary initial matrix.

    In ``D`` levels both sums terminate (``a^D = 0``), so the only
    approximation is the truncation of ``rho0`` itself; the weight the
    raising sum pushes past level ``D - 1`` shows up as ``trace_dev``.
    """
    rho0 = np.asarray(as_matrix(rho0), dtype=complex)
    if t == 0:
        return DensityMatrix(rho0.copy(), abs(complex(np.trace(rho0)) - 1.0), {"route": "series"})
    c = coefficients(p, t)
    mid = conjugate_by_number(lowering_sum(rho0, c.E), -1j * p.omega * t - c.log_F)
    outer = raising_sum(mid, c.G)
    return _finish((1.0 - c.G) * outer, trunc_tol, {"route": "series"})


def vacuum_rho(p: ModelParams, t: float, D: int, trunc_tol=TRUNC_TOL) -> DensityMatrix:
    """Thermal-like diagonal state ``(1 - G) G^n`` grown from the vacuum."""
    c = coefficients(p, t)
    pops = (1.0 - c.G) * c.G ** np.arange(D, dtype=float)
    return _finish(np.diag(pops).astype(complex), trunc_tol, {"route": "closed_form"})


def coherent_rho_nu0(p: ModelParams, alpha, t: float, D: int, trunc_tol=TRUNC_TOL) -> DensityMatrix:
    """Pure damping keeps a coherent state coherent: ``alpha -> alpha e^{-(mu/2 + i omega) t}``."""
    if p.nu != 0:
        raise ValueError(f"coherent_rho_nu0 requires nu == 0 (got nu={p.nu})")
    if not t >= 0:
        raise ValueError(f"time must be >= 0 (got {t})")
    amp = complex(alpha) * cmath.exp(-(0.5 * p.mu + 1j * p.omega) * t)
    psi = coherent_state(amp, D)
    return _finish(psi.projector(), trunc_tol, {"route": "closed_form", "amplitude": amp})


def coherent_rho(p: ModelParams, alpha, t: float, D: int, method="exponential", trunc_tol=TRUNC_TOL) -> DensityMatrix:
    """Closed form for a coherent initial state with ``nu > 0``.

    ``rho(t) = (1 - G) exp(|z|^2 log G) exp(-log G (z a^dag + conj(z) a - N))``
    with ``z = alpha e^{-(mu - nu) t / 2} e^{-i omega t}``.  ``method`` picks
    how the operator exponential is evaluated: ``"exponential"`` (scaling and
    squaring of the generator) or ``"disentangled"`` (ordered product).
    """
    if method not in ("exponential", "disentangled"):
        raise ValueError(f"unknown method {method!r}")
    if not t >= 0:
        raise ValueError(f"time must be >= 0 (got {t})")
    alpha = complex(alpha)
    if t == 0:
        return _finish(coherent_state(alpha, D).projector(), trunc_tol, {"route": "initial"})
    if p.nu == 0:
        return coherent_rho_nu0(p, alpha, t, D, trunc_tol)
    if t < T_MIN_SCALE / p.kappa:
        return series_rho(p, coherent_state(alpha, D).projector(), t, trunc_tol)

    c = coefficients(p, t)
    log_G = math.log(c.G)
    z = alpha * cmath.exp(-(0.5 * p.kappa + 1j * p.omega) * t)
    prefactor = (1.0 - c.G) * math.exp(abs(z) ** 2 * log_G)
    g = GaussianExponentParams(-z * log_G, -z.conjugate() * log_G, complex(log_G))
    W = padded_dim(D)
    if method == "exponential":
        a = annihilation(W)
        op = matrix_exp(g.alpha * a.conj().T + g.beta * a + g.gamma * number_operator(W))
    else:
        op = disentangled_product(g, W)
    return _finish(prefactor * op[:D, :D], trunc_tol, {"route": method, "z": z})


def squeezed_series_probe(p: ModelParams, prep: StatePrep, t: float, D: int, trunc_tol=TRUNC_TOL, with_oracle=True) -> DensityMatrix:
    """Series solution for squeezed or coherent-squeezed initial data.

    No compact form is known for these states; the series result is reported
    together with its trace distance to the RK4 oracle (``meta``).
    """
    if prep.kind not in ("squeezed", "coherent_squeezed"):
        raise ValueError(f"squeezed_series_probe expects a squeezed preparation, got {prep.kind!r}")
    rho0, leakage = prep.density(D)
    if leakage > trunc_tol:
        raise TruncationError(f"initial state leaks {leakage:.3e} beyond D={D}")
    out = series_rho(p, rho0, t, trunc_tol)
    out.meta["leakage"] = leakage
    if with_oracle:
        ref = oracle.evolve(p, rho0, t, richardson=False)
        out.meta["oracle_trace_distance"] = trace_distance(out, ref)
    return out
