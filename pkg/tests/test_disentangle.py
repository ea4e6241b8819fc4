import cmath
import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from dampedosc import disentangle as dt
from dampedosc.disentangle import GaussianExponentParams, phi1, phi2
from dampedosc.fock import annihilation, exp_number, max_norm, number_operator


def rand_c(rng, radius=1.0):
    return radius * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())


def test_phi_at_zero():
    assert phi1(0) == 1
    assert phi2(0) == 0.5


def test_phi_at_one():
    assert phi1(1) == pytest.approx(math.e - 1, rel=1e-15)
    assert phi2(1) == pytest.approx(math.e - 2, rel=1e-14)
    assert abs(phi1(1) - 1.718282) < 1e-6
    assert abs(phi2(1) - 0.718282) < 1e-6


def test_phi1_minus_ln2():
    assert phi1(-math.log(2)) == pytest.approx(0.5 / math.log(2), rel=1e-15)
    assert abs(phi1(-math.log(2)) - 0.721348) < 1e-6


@pytest.mark.parametrize("g", [1e-5, -3e-5j, 7e-6 + 2e-6j])
def test_taylor_branch_matches_high_precision(g):
    import mpmath

    with mpmath.workdps(50):
        z = mpmath.mpc(g.real, g.imag) if isinstance(g, complex) else mpmath.mpf(g)
        ref1 = complex((mpmath.exp(z) - 1) / z)
        ref2 = complex((mpmath.exp(z) - 1 - z) / z**2)
    assert abs(phi1(g) - ref1) <= 1e-15 * abs(ref1)
    assert abs(phi2(g) - ref2) <= 1e-15 * abs(ref2)


@pytest.mark.parametrize("switch", [dt.PHI_SWITCH, dt.PHI2_SWITCH])
@pytest.mark.parametrize("direction", [1, -1, 1j, -1j, cmath.exp(0.7j)])
def test_phi_continuity_across_switch(switch, direction):
    lo = switch * (1 - 1e-14) * direction
    hi = switch * (1 + 1e-14) * direction
    for f in (phi1, phi2):
        assert abs(f(hi) - f(lo)) < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.complex_numbers(max_magnitude=3.0))
def test_phi_relative_accuracy(g):
    import mpmath

    with mpmath.workdps(40):
        z = mpmath.mpc(g.real, g.imag)
        ref1 = complex(mpmath.hyp1f1(1, 2, z))
        ref2 = complex(mpmath.hyp1f1(1, 3, z) / 2)
    assert abs(phi1(g) - ref1) <= 1e-13 * abs(ref1)
    assert abs(phi2(g) - ref2) <= 1e-13 * abs(ref2)


def test_disentangled_product_pure_number():
    g = GaussianExponentParams(0, 0, 0.3 - 0.2j)
    np.testing.assert_allclose(dt.disentangled_product(g, 10), np.diag(np.exp((0.3 - 0.2j) * np.arange(10))), rtol=1e-14)


def test_disentangled_product_gamma0_is_bch_split():
    al, be, D = 0.4 + 0.1j, -0.3j, 24
    g = GaussianExponentParams(al, be, 0)
    from dampedosc.fock import exp_lowering, exp_raising

    expected = cmath.exp(al * be / 2) * exp_raising(al, D) @ exp_lowering(be, D)
    np.testing.assert_allclose(dt.disentangled_product(g, D), expected, atol=1e-14)


def test_disentangling_against_scipy():
    # independent matrix exponential in a large space; compare the leading 24 block of D=32
    rng = np.random.default_rng(5)
    for _ in range(10):
        g = GaussianExponentParams(rand_c(rng), rand_c(rng), rand_c(rng))
        W = 100
        a = annihilation(W)
        ref = scipy.linalg.expm(g.alpha * a.conj().T + g.beta * a + g.gamma * number_operator(W))[:24, :24]
        got = dt.disentangled_product(g, 32)[:24, :24]
        assert max_norm(got - ref) / max(1, max_norm(ref)) < 1e-9


def test_disentangling_random_draws():
    rng = np.random.default_rng(2024)
    devs = [dt.check_disentangling(GaussianExponentParams(rand_c(rng), rand_c(rng), rand_c(rng)), 32) for _ in range(50)]
    assert max(devs) < 1e-9


def test_contracted_exponential_limits():
    D = 16
    y = 0.4 - 0.1j
    np.testing.assert_allclose(dt.contracted_exponential(0, y, 0, D), exp_number(y, D), rtol=1e-14)
    c, g = dt.contracted_parameters(0.3, 1e-12, -0.2)
    assert c == pytest.approx(-0.3 * -0.2 / 2, rel=1e-10)
    assert g.alpha == pytest.approx(0.3, rel=1e-10)
    assert g.beta == pytest.approx(-0.2, rel=1e-10)
    c, g = dt.contracted_parameters(0.3, 0.0, -0.2)
    assert (c, g.alpha, g.beta) == (pytest.approx(0.03), pytest.approx(0.3), pytest.approx(-0.2))


def test_contracted_exponential_example():
    lhs = dt.contracted_exponential(0.3, math.log(2), -0.2j, 32)
    assert dt.check_contraction(0.3, math.log(2), -0.2j, 32) < 1e-9
    assert lhs.shape == (32, 32)


def test_contracted_exponential_detects_mismatch(monkeypatch):
    monkeypatch.setattr(dt, "contracted_parameters", lambda x, y, z: (0.1, GaussianExponentParams(x, z, y)))
    with pytest.raises(dt.IdentityError):
        dt.contracted_exponential(0.3, 0.5, 0.2, 16)


def test_parameter_roundtrip():
    rng = np.random.default_rng(17)
    for _ in range(200):
        gamma = rand_c(rng)
        if abs(gamma) < 1e-3:
            continue
        g = GaussianExponentParams(rand_c(rng), rand_c(rng), gamma)
        c, x, y, z = dt.disentangled_parameters(g)
        c2, back = dt.contracted_parameters(x, y, z)
        assert abs(back.alpha - g.alpha) < 1e-10
        assert abs(back.beta - g.beta) < 1e-10
        assert back.gamma == g.gamma
        assert abs(c + c2) < 1e-10


def test_similarity_transform():
    res = dt.similarity_transform_check(0, 8)
    assert res == {"raising": 0.0, "lowering": 0.0}
    a = annihilation(8)
    ad = a.conj().T
    lhs = exp_number(1j * math.pi, 8) @ ad @ exp_number(-1j * math.pi, 8)
    assert max_norm(lhs + ad) < 1e-14
    assert max(dt.similarity_transform_check(0.7 - 0.2j, 16).values()) < 1e-12


def test_commutation_relations():
    assert max(dt.commutation_identity_check(0, 0.4j, 32).values()) == 0
    assert max(dt.commutation_identity_check(0.5, 0, 32).values()) < 1e-15
    assert max(dt.commutation_identity_check(0.5, 0.3j, 32).values()) < 1e-9
    rng = np.random.default_rng(9)
    for _ in range(10):
        assert max(dt.commutation_identity_check(rand_c(rng), rand_c(rng), 32).values()) < 1e-9


def test_unpadded_truncation_would_fail():
    # why checks run in a padded space: the truncated product misses levels >= D
    from dampedosc.fock import exp_lowering, exp_raising, leading_block

    D = 32
    lhs = exp_lowering(1, D) @ exp_raising(1, D)
    rhs = math.e * exp_raising(1, D) @ exp_lowering(1, D)
    assert max_norm(leading_block(lhs - rhs)) > 1.0


def test_overflow_guard():
    with pytest.raises(OverflowError):
        dt.disentangled_product(GaussianExponentParams(0, 0, 30.0), 40)
    with pytest.raises(ValueError):
        GaussianExponentParams(complex("nan"), 0, 0)
