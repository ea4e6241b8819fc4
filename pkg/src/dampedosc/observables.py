"""Scalar diagnostics of density matrices."""
from __future__ import annotations

import numpy as np

from .fock import PureState, as_matrix

IMAG_TOL = 1e-10


def _pair(rho, sigma):
    r = as_matrix(rho)
    s = as_matrix(sigma)
    if r.shape != s.shape:
        raise ValueError(f"dimension mismatch: {r.shape} vs {s.shape}")
    return r, s


def _real(z, what):
    z = complex(z)
    if abs(z.imag) > IMAG_TOL * max(1.0, abs(z.real)):
        raise ValueError(f"{what} has imaginary residue {z.imag:.3e}")
    return z.real


def mean_photon(rho):
    r = as_matrix(rho)
    n = np.arange(r.shape[0])
    return _real(np.sum(n * np.diag(r)), "mean photon number")


def expect_a(rho):
    r = as_matrix(rho)
    # tr(a rho) = sum_n sqrt(n) rho[n, n-1]
    return complex(np.sum(np.sqrt(np.arange(1, r.shape[0])) * np.diagonal(r, -1)))


def purity(rho):
    r = as_matrix(rho)
    return _real(np.vdot(r.conj().T, r), "purity")


def trace_distance(rho, sigma):
    r, s = _pair(rho, sigma)
    d = r - s
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (d + d.conj().T)))))


def fidelity_pure(psi, rho):
    v = psi.amplitudes if isinstance(psi, PureState) else np.asarray(psi)
    r = as_matrix(rho)
    if v.shape[0] != r.shape[0]:
        raise ValueError(f"dimension mismatch: {v.shape[0]} vs {r.shape[0]}")
    return _real(np.vdot(v, r @ v), "fidelity")


def number_distribution(rho):
    return np.real(np.diag(as_matrix(rho))).copy()


def trace(rho):
    return _real(np.trace(as_matrix(rho)), "trace")
