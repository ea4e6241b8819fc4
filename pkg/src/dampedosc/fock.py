"""Truncated Fock-space linear algebra.

Operators are plain ``numpy`` complex arrays of shape ``(D, D)`` acting on the
basis ``|0>, ..., |D-1>``.  States carry the probability weight they lose to
truncation (``leakage``) so callers can assert a budget instead of trusting it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

LEAKAGE_BUDGET = 1e-10


class TruncationError(ValueError):
    """The truncated basis is too small for the requested state or evolution."""


def _check_dim(D):
    if int(D) != D or D < 2:
        raise ValueError(f"invalid dimension D={D!r}; need an integer D >= 2")
    return int(D)


def annihilation(D):
    """Lowering operator ``a`` with ``a[n-1, n] = sqrt(n)``."""
    D = _check_dim(D)
    return np.diag(np.sqrt(np.arange(1, D, dtype=float)), 1).astype(complex)


def creation(D):
    return annihilation(D).conj().T


def number_operator(D):
    D = _check_dim(D)
    return np.diag(np.arange(D, dtype=float)).astype(complex)


def identity(D):
    return np.eye(_check_dim(D), dtype=complex)


def leading_block(M, D=None, k=None):
    """Return the leading ``(D - k) x (D - k)`` block of ``M``.

    ``k`` defaults to ``ceil(D / 4)``.  Identities that hold only in infinite
    dimension are compared on this block.
    """
    if D is None:
        D = M.shape[0]
    if k is None:
        k = math.ceil(D / 4)
    n = D - k
    return M[:n, :n]


def max_norm(M):
    return float(np.max(np.abs(M))) if M.size else 0.0


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray
    leakage: float = 0.0

    @property
    def dim(self):
        return self.amplitudes.shape[0]

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def projector(self):
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def check(self, budget=LEAKAGE_BUDGET):
        if self.leakage > budget:
            raise TruncationError(
                f"truncation leakage {self.leakage:.3e} exceeds budget {budget:.1e} at D={self.dim}"
            )
        return self


@dataclass(frozen=True)
class DensityMatrix:
    """A density matrix together with the trace deviation found before renormalization."""

    matrix: np.ndarray
    trace_dev: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def defects(self):
        """``(hermiticity defect, |trace - 1|, min eigenvalue)``."""
        rho = self.matrix
        herm = max_norm(rho - rho.conj().T)
        trace = abs(np.trace(rho) - 1.0)
        min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
        return herm, float(trace), min_eig

    def validate(self, tol=1e-8):
        herm, trace, min_eig = self.defects()
        problems = []
        if herm > tol:
            problems.append(f"hermiticity defect {herm:.3e}")
        if trace > tol:
            problems.append(f"trace deviation {trace:.3e}")
        if min_eig < -tol:
            problems.append(f"min eigenvalue {min_eig:.3e}")
        if problems:
            raise ValueError("invalid density matrix: " + ", ".join(problems))
        return self


def as_matrix(rho):
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)


def fock_state(n, D):
    D = _check_dim(D)
    if not 0 <= n < D:
        raise TruncationError(f"Fock level {n} not representable at D={D}")
    psi = np.zeros(D, dtype=complex)
    psi[n] = 1.0
    return PureState(psi, 0.0)


def vacuum(D):
    return fock_state(0, D)


def coherent_state(alpha, D, strict=False, budget=LEAKAGE_BUDGET):
    """``|alpha> = exp(-|alpha|^2/2) sum_n alpha^n / sqrt(n!) |n>`` truncated at ``D``."""
    D = _check_dim(D)
    alpha = complex(alpha)
    psi = np.empty(D, dtype=complex)
    psi[0] = math.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, D):
        psi[n] = psi[n - 1] * alpha / math.sqrt(n)
    state = PureState(psi, _leakage(psi))
    return state.check(budget) if strict else state


def _leakage(psi):
    return max(0.0, 1.0 - float(np.vdot(psi, psi).real))


def _padded_dim(D):
    return 2 * D + 16


def squeeze_generator(beta, D):
    """``(beta a^dag^2 - conj(beta) a^2) / 2``."""
    a = annihilation(D)
    a2 = a @ a
    return 0.5 * (complex(beta) * a2.conj().T - complex(beta).conjugate() * a2)


def _squeeze(beta, psi):
    return matrix_exp(squeeze_generator(beta, psi.shape[0])) @ psi


def squeezed_state(beta, D, strict=False, budget=LEAKAGE_BUDGET):
    """Squeezed vacuum ``exp((beta a^dag^2 - conj(beta) a^2)/2) |0>``.

    The exponential is taken in a padded working space and the result cut to
    ``D`` levels without renormalizing, so the lost weight is the leakage.
    """
    D = _check_dim(D)
    W = _padded_dim(D)
    psi = _squeeze(beta, vacuum(W).amplitudes)[:D]
    state = PureState(psi, _leakage(psi))
    return state.check(budget) if strict else state


def coherent_squeezed_state(beta, alpha, D, strict=False, budget=LEAKAGE_BUDGET):
    """Squeeze applied after displacement: ``S(beta) D(alpha) |0>``."""
    D = _check_dim(D)
    W = _padded_dim(D)
    psi = _squeeze(beta, coherent_state(alpha, W).amplitudes)[:D]
    state = PureState(psi, _leakage(psi))
    return state.check(budget) if strict else state


# Taylor coefficients 1/k! for the scaling-and-squaring core.
_TAYLOR_ORDER = 18
_INV_FACT = [1.0 / math.factorial(k) for k in range(_TAYLOR_ORDER + 1)]


def matrix_exp(M):
    """Matrix exponential by scaling and squaring around a degree-18 Taylor core.

    The squaring count is ``ceil(log2(||M||_1)) + 1`` so the scaled matrix has
    1-norm at most 1/2, where the truncated series error is below 1e-22.
    """
    M = np.asarray(M, dtype=complex)
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix_exp: non-finite entries")
    n = M.shape[0]
    norm = float(np.max(np.sum(np.abs(M), axis=0))) if n else 0.0
    if norm == 0.0:
        return np.eye(n, dtype=complex)
    s = max(0, math.ceil(math.log2(norm)) + 1)
    A = M / 2.0**s
    # Horner evaluation of sum_k A^k / k!
    E = np.eye(n, dtype=complex) * _INV_FACT[_TAYLOR_ORDER]
    for k in range(_TAYLOR_ORDER - 1, -1, -1):
        E = A @ E
        E[np.diag_indices(n)] += _INV_FACT[k]
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(s):
            E = E @ E
    if not np.all(np.isfinite(E)):
        raise OverflowError(f"matrix_exp overflowed (||M||_1 = {norm:.3e})")
    return E


def exp_lowering(c, D):
    """``exp(c a)`` by its terminating series (``a^D = 0``); upper triangular."""
    return _exp_shift(complex(c), _check_dim(D)).T


def exp_raising(c, D):
    """``exp(c a^dag)`` by its terminating series; lower triangular."""
    return _exp_shift(complex(c), _check_dim(D))


def _exp_shift(c, D):
    # <i| exp(c a^dag) |j> = c^(i-j)/(i-j)! * sqrt(i!/j!) for i >= j
    half_log_fact = np.concatenate(([0.0], np.cumsum(0.5 * np.log(np.arange(1, D)))))
    i, j = np.indices((D, D))
    m = i - j
    mask = m >= 0
    mm = np.where(mask, m, 0)
    coef = np.zeros((D, D), dtype=complex)
    powers = np.empty(D, dtype=complex)
    powers[0] = 1.0
    for k in range(1, D):
        powers[k] = powers[k - 1] * c / k
    coef[mask] = powers[mm[mask]] * np.exp(half_log_fact[i[mask]] - half_log_fact[j[mask]])
    return coef


def exp_number(g, D):
    """``exp(g N)`` as a diagonal matrix."""
    D = _check_dim(D)
    g = complex(g)
    if g.real * (D - 1) > 700:
        raise OverflowError(f"exp({g} N) overflows at D={D}")
    return np.diag(np.exp(g * np.arange(D)))


STATE_KINDS = ("vacuum", "fock", "coherent", "squeezed", "coherent_squeezed", "custom")


@dataclass(frozen=True)
class StatePrep:
    """Initial-state descriptor; ``density(D)`` builds the matrix."""

    kind: str
    alpha: complex = 0j
    beta: complex = 0j
    n: int = 0
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in STATE_KINDS:
            raise ValueError(f"unknown state kind {self.kind!r}; expected one of {STATE_KINDS}")
        if self.kind == "custom" and self.matrix is None:
            raise ValueError("custom state needs a matrix")

    def pure(self, D):
        if self.kind == "vacuum":
            return vacuum(D)
        if self.kind == "fock":
            return fock_state(self.n, D)
        if self.kind == "coherent":
            return coherent_state(self.alpha, D)
        if self.kind == "squeezed":
            return squeezed_state(self.beta, D)
        if self.kind == "coherent_squeezed":
            return coherent_squeezed_state(self.beta, self.alpha, D)
        raise ValueError("custom state has no state vector")

    def density(self, D):
        """Return ``(rho0, leakage)`` at dimension ``D``."""
        if self.kind == "custom":
            rho = np.asarray(self.matrix, dtype=complex)
            if rho.shape != (D, D):
                raise ValueError(f"custom matrix has shape {rho.shape}, expected {(D, D)}")
            return rho.copy(), 0.0
        psi = self.pure(D)
        return psi.projector(), psi.leakage
