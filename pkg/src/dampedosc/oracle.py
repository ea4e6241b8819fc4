"""Numerical ground truth for the damped-oscillator master equation.

Fixed-step RK4 on the Liouvillian, plus a direct steady-state solve.
Nothing here touches the closed-form solutions; only the Fock operator
constructors are shared.

Vectorization is column stacking, ``vec(rho) = rho.reshape(-1, order="F")``,
so ``vec(A rho B) = kron(B.T, A) vec(rho)``.
"""
from __future__ import annotations

import math
import os

import numpy as np
import scipy.linalg
import scipy.linalg.lapack

from .coeffs import ModelParams
from .fock import DensityMatrix, annihilation, as_matrix, max_norm, number_operator

DEFAULT_MAX_DIM = 128


class IntegrationError(RuntimeError):
    pass


def max_dim():
    return int(os.environ.get("DOK_MAX_DIM", DEFAULT_MAX_DIM))


def vec(rho):
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v, D):
    return np.asarray(v).reshape((D, D), order="F")


def liouvillian(p: ModelParams, D: int, max_dim_override=None) -> np.ndarray:
    """Dense ``D^2 x D^2`` generator acting on column-stacked density matrices."""
    limit = max_dim() if max_dim_override is None else max_dim_override
    if D > limit:
        raise ValueError(f"D={D} exceeds the dense Liouvillian limit {limit} (set DOK_MAX_DIM to raise it)")
    a = annihilation(D)
    ad = a.conj().T
    N = number_operator(D)
    M = a @ ad
    I = np.eye(D)

    def left(A):
        return np.kron(I, A)

    def right(B):
        return np.kron(B.T, I)

    def sandwich(A, B):
        return np.kron(B.T, A)

    L = -1j * p.omega * (left(N) - right(N))
    L += -0.5 * p.mu * (left(N) + right(N) - 2 * sandwich(a, ad))
    L += -0.5 * p.nu * (left(M) + right(M) - 2 * sandwich(ad, a))
    return L


def rhs(p: ModelParams, rho: np.ndarray) -> np.ndarray:
    """Matrix-free right-hand side of the master equation."""
    D = rho.shape[0]
    n = np.arange(D, dtype=float)
    m = n + 1.0
    m[-1] = 0.0  # a a^dag is diag(1, ..., D-1, 0) after truncation
    sq = np.sqrt(n)
    out = -1j * p.omega * (n[:, None] - n[None, :]) * rho
    out -= 0.5 * p.mu * (n[:, None] + n[None, :]) * rho
    out -= 0.5 * p.nu * (m[:, None] + m[None, :]) * rho
    # a rho a^dag: (i, j) <- sqrt(i+1) sqrt(j+1) rho[i+1, j+1]
    out[:-1, :-1] += p.mu * (sq[1:, None] * sq[None, 1:]) * rho[1:, 1:]
    # a^dag rho a: (i, j) <- sqrt(i) sqrt(j) rho[i-1, j-1]
    out[1:, 1:] += p.nu * (sq[1:, None] * sq[None, 1:]) * rho[:-1, :-1]
    return out


def default_step(p: ModelParams, D: int) -> float:
    """Step with ``(mu + nu + |omega|) D h = 0.1``."""
    scale = (p.mu + p.nu + abs(p.omega)) * D
    return 0.1 / scale if scale > 0 else 0.1


def rk4(f, y, t, h):
    """Integrate ``y' = f(y)`` to time ``t`` with steps no larger than ``h``."""
    steps = max(1, math.ceil(t / h - 1e-12)) if t > 0 else 0
    if steps == 0:
        return y.copy(), 0, 0.0
    dt = t / steps
    for _ in range(steps):
        k1 = f(y)
        k2 = f(y + 0.5 * dt * k1)
        k3 = f(y + 0.5 * dt * k2)
        k4 = f(y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return y, steps, dt


def evolve(p: ModelParams, rho0, t: float, h=None, richardson=True, dense=False, tol=1e-7) -> DensityMatrix:
    """RK4 evolution of ``rho0`` over ``[0, t]``.

    ``meta`` carries the step count, step size and, with ``richardson``, the
    max-norm difference against a half-step run.  Raises
    :class:`IntegrationError` when the result is not a valid density matrix
    within ``tol``.
    """
    if not t >= 0:
        raise ValueError(f"time must be >= 0 (got {t})")
    rho0 = np.asarray(as_matrix(rho0), dtype=complex)
    D = rho0.shape[0]
    if h is None:
        h = default_step(p, D)
    if dense:
        L = liouvillian(p, D)
        f = lambda v: L @ v  # noqa: E731
        y, steps, dt = rk4(f, vec(rho0), t, h)
        rho = unvec(y, D)
    else:
        f = lambda r: rhs(p, r)  # noqa: E731
        rho, steps, dt = rk4(f, rho0, t, h)
    meta = {"steps": steps, "h": dt}
    if richardson and steps:
        half, _, _ = rk4(lambda r: rhs(p, r), rho0, t, dt / 2)
        meta["richardson"] = max_norm(rho - half)
    out = DensityMatrix(rho, abs(complex(np.trace(rho)) - 1.0), meta)
    if tol is not None:
        try:
            out.validate(tol)
        except ValueError as exc:
            raise IntegrationError(f"RK4 result invalid (h={dt:.3e}): {exc}") from exc
    return out


def steady_state(p: ModelParams, D: int, method="solve") -> DensityMatrix:
    """Unit-trace null vector of the Liouvillian.

    ``method="solve"`` swaps one redundant row of ``L vec(rho) = 0`` for the
    trace condition and solves the dense system by LU; ``method="integrate"`` relaxes the
    maximally mixed state with RK4 until the generator residual vanishes.
    """
    if method == "integrate":
        return _steady_by_integration(p, D)
    if method != "solve":
        raise ValueError(f"unknown steady-state method {method!r}")
    L = liouvillian(p, D)
    # the diagonal rows of L sum to zero (trace preservation), so the
    # (0, 0) row is redundant and can carry the normalization instead
    A = L.copy()
    A[0, :] = vec(np.eye(D))
    b = np.zeros(D * D, dtype=complex)
    b[0] = 1.0
    lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    anorm = np.linalg.norm(A, 1)
    rcond, info = scipy.linalg.lapack.zgecon(lu, anorm, norm="1")
    if info != 0 or rcond < 1e-13:
        raise np.linalg.LinAlgError(f"ill-conditioned steady-state system (rcond={rcond:.3e})")
    x = scipy.linalg.lu_solve((lu, piv), b, check_finite=False)
    rho = unvec(x, D)
    rho = 0.5 * (rho + rho.conj().T)
    residual = float(np.linalg.norm(L @ vec(rho)))
    return DensityMatrix(rho, abs(complex(np.trace(rho)) - 1.0), {"residual": residual, "rcond": float(rcond)})


def _steady_by_integration(p, D, resid_tol=1e-14, max_time=None):
    # diagonal start: coherences never appear, so the Hamiltonian term is inert
    rho = np.eye(D, dtype=complex) / D
    scale = (p.mu + p.nu) * D + abs(p.omega) * D
    h = 1.0 / scale
    gap = p.mu - p.nu
    if max_time is None:
        max_time = 60.0 / gap
    chunk = 10.0 / gap
    t = 0.0
    while True:
        rho, _, _ = rk4(lambda r: rhs(p, r), rho, chunk, h)
        t += chunk
        residual = max_norm(rhs(p, rho))
        if residual < resid_tol or t >= max_time:
            break
    return DensityMatrix(rho, abs(complex(np.trace(rho)) - 1.0), {"residual": residual, "time": t})
