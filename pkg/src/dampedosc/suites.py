"""Seeded verification suites driven by ``dampedosc verify``.

Each suite returns a list of check records ``{"name", "max_deviation",
"tol", "passed"}``.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from . import analytic, classical, disentangle, oracle
from .coeffs import ModelParams, coefficients
from .fock import coherent_state, leading_block, max_norm
from .observables import trace_distance

SUITES = ("identities", "proof_steps", "oracle_agreement", "classical")


def _record(name, devs, tol):
    worst = float(max(devs)) if len(devs) else 0.0
    return {"name": name, "max_deviation": worst, "tol": tol, "passed": bool(worst < tol), "samples": len(devs)}


def _rand_complex(rng, radius):
    return radius * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())


def identities(seed, draws=200, D=32):
    rng = np.random.default_rng(seed)
    eq8, eq9, roundtrip = [], [], []
    comm = {"lowering_raising": [], "lowering_number": [], "number_raising": []}
    similarity = []
    for _ in range(draws):
        g = disentangle.GaussianExponentParams(_rand_complex(rng, 1), _rand_complex(rng, 1), _rand_complex(rng, 1))
        eq8.append(disentangle.check_disentangling(g, D))
        x, y, z = _rand_complex(rng, 1), _rand_complex(rng, 1), _rand_complex(rng, 1)
        eq9.append(disentangle.check_contraction(x, y, z, D))
        if abs(g.gamma) >= 1e-3:
            c, x2, y2, z2 = disentangle.disentangled_parameters(g)
            c2, back = disentangle.contracted_parameters(x2, y2, z2)
            roundtrip.append(max(abs(back.alpha - g.alpha), abs(back.beta - g.beta), abs(back.gamma - g.gamma), abs(c + c2)))
    for _ in range(20):
        res = disentangle.commutation_identity_check(_rand_complex(rng, 1), _rand_complex(rng, 1), D)
        for key, val in res.items():
            comm[key].append(val)
        sim = disentangle.similarity_transform_check(_rand_complex(rng, 1), 16)
        similarity.append(max(sim.values()))
    out = [
        _record("disentangling_formula", eq8, 1e-9),
        _record("contracted_exponential", eq9, 1e-9),
        _record("parameter_roundtrip", roundtrip, 1e-10),
        _record("similarity_transform", similarity, 1e-10),
    ]
    out += [_record(f"commutation_{k}", v, 1e-9) for k, v in comm.items()]
    return out


def proof_steps(seed, samples=20, D=48):
    """Lowering-sum and number-conjugation identities on coherent projectors."""
    rng = np.random.default_rng(seed)
    first, second = [], []
    for _ in range(samples):
        alpha = _rand_complex(rng, 1.5)
        mu = rng.uniform(0.1, 1.0)
        p = ModelParams(mu, rng.uniform(0.0, 0.9) * mu, rng.uniform(0.0, 2.0))
        t = rng.uniform(0.05, 5.0)
        c = coefficients(p, t)
        proj = coherent_state(alpha, D).projector()
        lhs = analytic.lowering_sum(proj, c.E)
        rhs = math.exp(c.E * abs(alpha) ** 2) * proj
        first.append(max_norm(leading_block(lhs - rhs)))
        gamma = -1j * p.omega * t - c.log_F
        lhs = analytic.conjugate_by_number(proj, gamma)
        eg = cmath.exp(gamma)
        rhs = math.exp(-abs(alpha) ** 2 * (1 - abs(eg) ** 2)) * coherent_state(alpha * eg, D).projector()
        second.append(max_norm(leading_block(lhs - rhs)))
    return [_record("first_step", first, 1e-9), _record("second_step", second, 1e-9)]


def oracle_agreement(seed, D=40):
    rng = np.random.default_rng(seed)
    p = ModelParams(0.2, 0.1, 1.0)
    vac, coh = [], []
    for t in (0.5, 1.0):
        rho0 = np.zeros((D, D), complex)
        rho0[0, 0] = 1
        vac.append(trace_distance(analytic.vacuum_rho(p, t, D), oracle.evolve(p, rho0, t, richardson=False)))
        alpha = _rand_complex(rng, 1.2)
        proj = coherent_state(alpha, D).projector()
        coh.append(trace_distance(analytic.coherent_rho(p, alpha, t, D), oracle.evolve(p, proj, t, richardson=False)))
    return [_record("vacuum_vs_oracle", vac, 1e-6), _record("coherent_vs_oracle", coh, 1e-6)]


def classical_suite(seed):
    rng = np.random.default_rng(seed)
    cp = classical.ClassicalParams(0.1, 1.0, 1.0, 0.0)
    ts, xs = classical.integrate_ode(cp, 20.0)
    ode = [abs(classical.classical_solution(cp, t) - x) for t, x in zip(ts, xs)]
    resid = []
    for _ in range(10):
        cpr = classical.ClassicalParams(rng.uniform(0.01, 0.5), rng.uniform(0.5, 2.0), rng.normal(), rng.normal())
        resid += [classical.ode_residual(cpr, t) for t in rng.uniform(0, 20, 5)]
    return [_record("rk4_vs_exact", ode, 1e-8), _record("ode_residual", resid, 1e-8)]


def run(suite, seed):
    if suite == "identities":
        return identities(seed)
    if suite == "proof_steps":
        return proof_steps(seed)
    if suite == "oracle_agreement":
        return oracle_agreement(seed)
    if suite == "classical":
        return classical_suite(seed)
    raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")
