import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dampedosc.coeffs import ModelParams, coefficients, g_limit


def direct(mu, nu, t):
    """Unfactored cosh/sinh forms, used as the reference evaluation."""
    x = (mu - nu) * t / 2
    F = math.cosh(x) + (mu + nu) / (mu - nu) * math.sinh(x)
    E = 2 * mu / (mu - nu) * math.sinh(x) / F
    G = 2 * nu / (mu - nu) * math.sinh(x) / F
    return E, F, G


def test_t0():
    c = coefficients(ModelParams(0.2, 0.1, 1.0), 0.0)
    assert (c.E, c.F, c.G) == (0.0, 1.0, 0.0)


def test_reference_values():
    c = coefficients(ModelParams(0.2, 0.1, 1.0), 1.0)
    E, F, G = direct(0.2, 0.1, 1.0)
    assert c.F == pytest.approx(F, rel=1e-14)
    assert c.G == pytest.approx(G, rel=1e-14)
    assert c.E == pytest.approx(E, rel=1e-14)
    assert c.F == pytest.approx(1.151313, abs=1e-6)
    assert c.G == pytest.approx(0.086894, abs=1e-6)
    assert c.E == pytest.approx(0.173787, abs=1e-6)
    assert c.G - 1 == pytest.approx(-math.exp(0.05) / c.F, rel=1e-14)


def test_nu0_matches_simple_form():
    p = ModelParams(0.2, 0.0, 0.0)
    c = coefficients(p, 1.0)
    assert c.E == pytest.approx(1 - math.exp(-0.2), abs=1e-14)
    assert c.E == pytest.approx(0.181269, abs=1e-6)
    for t in (0.0, 0.3, 4.0, 40.0):
        c = coefficients(p, t)
        assert c.F == pytest.approx(math.exp(0.1 * t), rel=1e-14)
        assert c.G == 0.0
        assert abs(c.E - (1 - math.exp(-0.2 * t))) < 1e-14


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        coefficients(ModelParams(0.2, 0.1), -1.0)


@pytest.mark.parametrize("mu,nu", [(0.1, 0.2), (0.2, 0.2), (0.2, -0.1), (math.inf, 0.1), (math.nan, 0.0)])
def test_invalid_params(mu, nu):
    with pytest.raises(ValueError):
        ModelParams(mu, nu, 1.0)


def test_invariant_message_names_condition():
    with pytest.raises(ValueError, match="μ > ν ≥ 0"):
        ModelParams(0.1, 0.2)


@pytest.mark.parametrize("mu,nu,expected", [(0.3, 0.0, 0.0), (0.2, 0.1, 0.5), (1.0, 0.9, 0.9)])
def test_g_limit(mu, nu, expected):
    p = ModelParams(mu, nu)
    assert g_limit(p) == pytest.approx(expected, rel=1e-15)
    assert coefficients(p, 1e4 / (mu - nu)).G == pytest.approx(expected, rel=1e-12, abs=1e-15)


def test_large_time_no_overflow():
    p = ModelParams(1.0, 0.5)
    c = coefficients(p, 5000.0)
    assert c.F == math.inf
    assert math.isfinite(c.log_F)
    assert c.G == pytest.approx(0.5)
    assert c.E == pytest.approx(1.0)


rates = st.tuples(st.floats(0.01, 5.0), st.floats(0.0, 0.99)).map(lambda mr: (mr[0], mr[0] * mr[1]))


@settings(max_examples=100, deadline=None)
@given(rates, st.floats(0.0, 1.0))
def test_third_step_identities(mn, frac):
    mu, nu = mn
    if mu - nu < 1e-6:
        return
    p = ModelParams(mu, nu)
    t = frac * 50 / (mu - nu)
    c = coefficients(p, t)
    x = (mu - nu) * t / 2
    # G - 1 = -e^{x}/F and E - 1 = -e^{-x}/F, written with log F to stay finite
    assert c.G - 1 == pytest.approx(-math.exp(x - c.log_F), rel=1e-12)
    # E - 1 cancels as E -> 1, so measure against the operand scale |E| + 1
    assert abs((c.E - 1) + math.exp(-x - c.log_F)) <= 1e-12 * (abs(c.E) + 1)


@settings(max_examples=60, deadline=None)
@given(rates, st.floats(0.01, 20.0))
def test_against_unfactored_form(mn, t):
    mu, nu = mn
    if mu - nu < 1e-6:
        return
    c = coefficients(ModelParams(mu, nu), t)
    E, F, G = direct(mu, nu, t)
    assert c.E == pytest.approx(E, rel=1e-12)
    assert c.F == pytest.approx(F, rel=1e-12)
    assert c.G == pytest.approx(G, rel=1e-12, abs=1e-300)


def test_monotonicity_and_bounds():
    p = ModelParams(0.5, 0.2)
    ts = [0.01 * k for k in range(1, 2000)]
    cs = [coefficients(p, t) for t in ts]
    for prev, cur in zip(cs, cs[1:]):
        assert cur.G > prev.G
        assert cur.E > prev.E
        assert cur.F > prev.F
    assert all(0 < c.G < g_limit(p) for c in cs)
    assert all(c.F >= 1 for c in cs)
