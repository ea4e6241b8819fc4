"""Disentangling identities for exponentials of ``a^dag``, ``a`` and ``N``.

The identities hold exactly only in infinite dimension.  Each check therefore
evaluates both sides in a padded working space, cuts them back to the leading
``(D - k) x (D - k)`` block and reports a scaled max-norm deviation
``max|L - R| / max(1, max|R|)``; large ``Re(gamma)`` makes entries of order
``exp(gamma D)``, where an absolute threshold would sit below roundoff.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .fock import (
    annihilation,
    exp_lowering,
    exp_number,
    exp_raising,
    leading_block,
    matrix_exp,
    max_norm,
    number_operator,
)

PHI_SWITCH = 1e-4
PHI2_SWITCH = 0.1
IDENTITY_TOL = 1e-9


class IdentityError(AssertionError):
    pass


@dataclass(frozen=True)
class GaussianExponentParams:
    """Coefficients of ``alpha a^dag + beta a + gamma N``."""

    alpha: complex
    beta: complex
    gamma: complex

    def __post_init__(self):
        for v in (self.alpha, self.beta, self.gamma):
            if not cmath.isfinite(complex(v)):
                raise ValueError("exponent parameters must be finite")


# Taylor coefficients of phi1 = sum g^k/(k+1)!, phi2 = sum g^k/(k+2)!, through g^8.
_PHI1_TAYLOR = [1.0 / math.factorial(k + 1) for k in range(9)]
_PHI2_TAYLOR = [1.0 / math.factorial(k + 2) for k in range(9)]


def _poly(coefs, g):
    acc = 0j
    for c in reversed(coefs):
        acc = acc * g + c
    return acc


def phi1(gamma):
    """``(e^g - 1) / g`` with its removable singularity at 0."""
    g = complex(gamma)
    if abs(g) < PHI_SWITCH:
        return _poly(_PHI1_TAYLOR, g)
    return cexpm1(g) / g


def phi2(gamma):
    """``(e^g - 1 - g) / g^2``.

    The closed form cancels to about ``eps / |g|`` relative error, so the
    series is kept up to ``|g| < 0.1``.
    """
    g = complex(gamma)
    if abs(g) < PHI2_SWITCH:
        return _poly(_PHI2_TAYLOR, g)
    return (cexpm1(g) - g) / (g * g)


def cexpm1(g):
    """Complex ``exp(g) - 1`` without cancellation near 0."""
    g = complex(g)
    s = math.sin(g.imag)
    return math.expm1(g.real) * complex(math.cos(g.imag), s) + complex(-2.0 * math.sin(g.imag / 2) ** 2, s)


def disentangled_product(g: GaussianExponentParams, D: int) -> np.ndarray:
    """``exp(alpha a^dag + beta a + gamma N)`` as the ordered product

    ``exp(alpha beta phi2) exp(alpha phi1 a^dag) exp(gamma N) exp(beta phi1 a)``,
    with the shift exponentials built from their terminating series.  Being a
    lower-diagonal-upper product, every entry is exact for the infinite
    operator restricted to ``D`` levels.
    """
    p1 = phi1(g.gamma)
    scalar = cmath.exp(g.alpha * g.beta * phi2(g.gamma))
    return scalar * (exp_raising(g.alpha * p1, D) @ exp_number(g.gamma, D) @ exp_lowering(g.beta * p1, D))


def direct_exponential(g: GaussianExponentParams, D: int) -> np.ndarray:
    a = annihilation(D)
    return matrix_exp(g.alpha * a.conj().T + g.beta * a + g.gamma * number_operator(D))


def contracted_parameters(x, y, z):
    """Rewrite ``exp(x a^dag) exp(y N) exp(z a)`` as ``exp(c) exp(alpha a^dag + beta a + y N)``.

    Returns ``(c, GaussianExponentParams)``; the ``y -> 0`` limit is carried
    by ``phi1``/``phi2`` so no branch on ``y == 0`` is needed.
    """
    p1 = phi1(y)
    c = -complex(x) * complex(z) * phi2(y) / (p1 * p1)
    return c, GaussianExponentParams(complex(x) / p1, complex(z) / p1, complex(y))


def disentangled_parameters(g: GaussianExponentParams):
    """Inverse of :func:`contracted_parameters`: ``(c, x, y, z)`` of the ordered product."""
    p1 = phi1(g.gamma)
    return g.alpha * g.beta * phi2(g.gamma), g.alpha * p1, complex(g.gamma), g.beta * p1


def padded_dim(D):
    return 2 * D + 16


def scaled_deviation(L, R, D, k=None):
    """Leading-block max-norm deviation scaled by ``max(1, max|R|)``."""
    Lb = leading_block(L[:D, :D], D, k)
    Rb = leading_block(R[:D, :D], D, k)
    return max_norm(Lb - Rb) / max(1.0, max_norm(Rb))


def check_disentangling(g: GaussianExponentParams, D: int, k=None) -> float:
    """Deviation between both sides of the disentangling formula on the leading block."""
    W = padded_dim(D)
    return scaled_deviation(direct_exponential(g, W), disentangled_product(g, W), D, k)


def contracted_exponential(x, y, z, D, tol=IDENTITY_TOL, check=True):
    """``exp(x a^dag) exp(y N) exp(z a)`` at dimension ``D``.

    With ``check`` set, the contracted right-hand side
    ``exp(c) exp(alpha a^dag + beta a + y N)`` is evaluated independently
    and must agree on the leading block; :class:`IdentityError` otherwise.
    """
    lhs = exp_raising(x, D) @ exp_number(y, D) @ exp_lowering(z, D)
    if check:
        dev = check_contraction(x, y, z, D)
        if dev > tol:
            raise IdentityError(f"contracted exponential mismatch {dev:.3e} > {tol:.1e}")
    return lhs


def check_contraction(x, y, z, D, k=None) -> float:
    W = padded_dim(D)
    lhs = exp_raising(x, W) @ exp_number(y, W) @ exp_lowering(z, W)
    c, g = contracted_parameters(x, y, z)
    rhs = cmath.exp(c) * direct_exponential(g, W)
    return scaled_deviation(lhs, rhs, D, k)


def similarity_transform_check(gamma, D):
    """Deviations of ``e^{gN} a^dag e^{-gN} = e^g a^dag`` and ``e^{gN} a e^{-gN} = e^{-g} a``.

    Exact under truncation since ``e^{gN}`` is diagonal.
    """
    g = complex(gamma)
    a = annihilation(D)
    ad = a.conj().T
    U = exp_number(g, D)
    Uinv = exp_number(-g, D)
    dev_raise = max_norm(U @ ad @ Uinv - cmath.exp(g) * ad)
    dev_lower = max_norm(U @ a @ Uinv - cmath.exp(-g) * a)
    return {"raising": dev_raise, "lowering": dev_lower}


def commutation_identity_check(s, t, D, k=None):
    """Leading-block deviations of the three reordering relations

    ``e^{sa} e^{ta^dag} = e^{st} e^{ta^dag} e^{sa}``,
    ``e^{sa} e^{tN} = e^{tN} e^{s e^t a}`` and
    ``e^{tN} e^{sa^dag} = e^{s e^t a^dag} e^{tN}``.
    """
    s = complex(s)
    t = complex(t)
    W = padded_dim(D)
    et = cmath.exp(t)
    eN = exp_number(t, W)
    first = scaled_deviation(
        exp_lowering(s, W) @ exp_raising(t, W),
        cmath.exp(s * t) * exp_raising(t, W) @ exp_lowering(s, W),
        D, k,
    )
    second = scaled_deviation(exp_lowering(s, W) @ eN, eN @ exp_lowering(s * et, W), D, k)
    third = scaled_deviation(eN @ exp_raising(s, W), exp_raising(s * et, W) @ eN, D, k)
    return {"lowering_raising": first, "lowering_number": second, "number_raising": third}
