"""Command-line front end: ``dampedosc {evolve,verify,sweep,steady}``.

Exit codes: 0 success, 2 config error, 3 verification or invariant failure,
4 under-truncation.
"""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import analytic, observables, oracle, suites
from .coeffs import ModelParams
from .fock import StatePrep, TruncationError

log = logging.getLogger("dampedosc")

EXIT_OK, EXIT_CONFIG, EXIT_FAILED, EXIT_TRUNCATION = 0, 2, 3, 4
METHODS = ("closed_form", "series", "oracle")
CSV_COLUMNS = ["t", "method", "trace", "purity", "mean_photon", "re_expect_a", "im_expect_a", "leakage", "trace_dev"]
SWEEP_AXES = ["mu", "nu", "omega", "alpha_abs", "t"]
SWEEP_COLUMNS = SWEEP_AXES + CSV_COLUMNS[1:] + ["skipped"]


class ConfigError(ValueError):
    pass


def fmt(x):
    return format(float(x), ".17g")


def parse_complex(v):
    if v is None:
        return 0j
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, dict):
        return complex(float(v.get("re", 0.0)), float(v.get("im", 0.0)))
    if isinstance(v, str):
        return complex(v.replace(" ", "").replace("i", "j"))
    return complex(v)


def load_config(path):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def params_from(cfg):
    try:
        raw = cfg["params"]
        return ModelParams(float(raw["mu"]), float(raw["nu"]), float(raw.get("omega", 0.0)))
    except KeyError as exc:
        raise ConfigError(f"missing config field {exc}") from exc


def state_from(cfg):
    raw = cfg.get("state", {"kind": "vacuum"})
    if "kind" not in raw:
        raise ConfigError("state.kind is required")
    kwargs = {"kind": raw["kind"], "alpha": parse_complex(raw.get("alpha")), "beta": parse_complex(raw.get("beta"))}
    if "n" in raw:
        kwargs["n"] = int(raw["n"])
    if raw["kind"] == "custom":
        m = raw.get("matrix")
        if m is None:
            raise ConfigError("custom state needs a matrix")
        kwargs["matrix"] = np.array([[parse_complex(x) for x in row] for row in m])
    return StatePrep(**kwargs)


def times_from(cfg):
    raw = cfg.get("time")
    if raw is None:
        raise ConfigError("missing config field 'time'")
    if "grid" in raw:
        ts = [float(t) for t in raw["grid"]]
    else:
        t_max, dt = float(raw["t_max"]), float(raw["dt"])
        if dt <= 0 or t_max < 0:
            raise ConfigError("time.dt must be > 0 and time.t_max >= 0")
        n = int(round(t_max / dt))
        ts = [i * dt for i in range(n + 1)]
    if any(t < 0 for t in ts) or ts != sorted(ts):
        raise ConfigError("time grid must be nonnegative and increasing")
    return ts


def dim_from(cfg, override):
    D = int(override if override is not None else cfg.get("dim", 40))
    cap = oracle.max_dim()
    if D < 2 or D > cap:
        raise ConfigError(f"dim={D} outside [2, {cap}] (DOK_MAX_DIM caps D)")
    return D


def methods_from(cfg, prep):
    methods = cfg.get("methods", list(METHODS))
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise ConfigError(f"unknown methods {bad}; expected a subset of {list(METHODS)}")
    if "closed_form" in methods and prep.kind not in ("vacuum", "coherent"):
        raise ConfigError(f"closed_form needs a vacuum or coherent state, not {prep.kind!r}")
    return methods


def closed_form(p, prep, t, D):
    if prep.kind == "vacuum":
        return analytic.vacuum_rho(p, t, D)
    return analytic.coherent_rho(p, prep.alpha, t, D)


def observe(rho):
    a = observables.expect_a(rho)
    return {
        "trace": observables.trace(rho),
        "purity": observables.purity(rho),
        "mean_photon": observables.mean_photon(rho),
        "re_expect_a": a.real,
        "im_expect_a": a.imag,
    }


def run_evolve(cfg, dim_override=None):
    """Evolve the configured state; return (rows, summary)."""
    p = params_from(cfg)
    prep = state_from(cfg)
    D = dim_from(cfg, dim_override)
    ts = times_from(cfg)
    methods = methods_from(cfg, prep)
    rho0, leakage = prep.density(D)

    states = {m: [] for m in methods}
    rows = []
    oracle_rho, oracle_t = rho0, 0.0
    for t in ts:
        for m in methods:
            if m == "closed_form":
                rho = closed_form(p, prep, t, D)
            elif m == "series":
                rho = analytic.series_rho(p, rho0, t)
            else:
                rho = oracle.evolve(p, oracle_rho, t - oracle_t, richardson=False)
                oracle_rho, oracle_t = rho.matrix, t
            states[m].append(rho)
            row = {"t": t, "method": m, **observe(rho), "leakage": leakage, "trace_dev": rho.trace_dev}
            rows.append(row)

    pairs = {}
    for m1, m2 in itertools.combinations(methods, 2):
        dists = [observables.trace_distance(r1, r2) for r1, r2 in zip(states[m1], states[m2])]
        pairs[f"{m1}~{m2}"] = {"final": dists[-1] if dists else 0.0, "max": max(dists, default=0.0)}
    summary = {
        "params": {"mu": p.mu, "nu": p.nu, "omega": p.omega},
        "state": {"kind": prep.kind, "alpha": [prep.alpha.real, prep.alpha.imag], "beta": [prep.beta.real, prep.beta.imag], "n": prep.n},
        "dim": D,
        "methods": methods,
        "times": len(ts),
        "leakage": leakage,
        "trace_distance": pairs,
    }
    return rows, summary


def write_csv(path, columns, rows):
    out = open(path, "w", newline="") if path not in (None, "-") else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(row[c]) if isinstance(row.get(c), (float, int, np.floating)) and not isinstance(row.get(c), bool) else row.get(c, "") for c in columns])
    finally:
        if out is not sys.stdout:
            out.close()


def write_json(path, obj):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path in (None, "-"):
        print(text)
    else:
        Path(path).write_text(text + "\n")


def sweep_points(cfg):
    grid = cfg.get("grid", {})
    unknown = set(grid) - set(SWEEP_AXES)
    if unknown:
        raise ConfigError(f"unknown sweep axes {sorted(unknown)}; allowed {SWEEP_AXES}")
    raw = cfg.get("params", {})
    alpha = parse_complex(cfg.get("state", {}).get("alpha"))
    base = {
        "mu": raw.get("mu"),
        "nu": raw.get("nu"),
        "omega": raw.get("omega", 0.0),
        "alpha_abs": abs(alpha),
        "t": cfg.get("time", {}).get("t_max", 1.0) if isinstance(cfg.get("time"), dict) else 1.0,
    }
    axes = [[float(v) for v in grid[k]] if k in grid else [base[k]] for k in SWEEP_AXES]
    phase = alpha / abs(alpha) if abs(alpha) > 0 else 1.0
    for values in itertools.product(*axes):
        yield dict(zip(SWEEP_AXES, values)), phase


def sweep_row(point, phase, kind, methods, D):
    rows = []
    base = {k: point[k] for k in SWEEP_AXES}
    if point["mu"] is None or point["nu"] is None:
        raise ConfigError("params.mu and params.nu are required")
    try:
        p = ModelParams(point["mu"], point["nu"], point["omega"])
    except ValueError as exc:
        return [{**base, "method": m, "skipped": str(exc)} for m in methods]
    prep = StatePrep(kind, alpha=point["alpha_abs"] * phase)
    rho0, leakage = prep.density(D)
    for m in methods:
        try:
            if m == "closed_form":
                rho = closed_form(p, prep, point["t"], D)
            elif m == "series":
                rho = analytic.series_rho(p, rho0, point["t"])
            else:
                rho = oracle.evolve(p, rho0, point["t"], richardson=False)
        except TruncationError as exc:
            rows.append({**base, "method": m, "skipped": f"under-truncation: {exc}"})
            continue
        except oracle.IntegrationError as exc:
            rows.append({**base, "method": m, "skipped": f"integration failure: {exc}"})
            continue
        rows.append({**base, "method": m, **observe(rho), "leakage": leakage, "trace_dev": rho.trace_dev, "skipped": ""})
    return rows


def run_sweep(cfg, dim_override=None, jobs=1):
    kind = cfg.get("state", {}).get("kind", "coherent")
    if kind not in ("vacuum", "coherent"):
        raise ConfigError("sweep supports vacuum and coherent states (|alpha| is a sweep axis)")
    D = dim_from(cfg, dim_override)
    methods = methods_from(cfg, StatePrep(kind))
    points = list(sweep_points(cfg))
    work = lambda pp: sweep_row(pp[0], pp[1], kind, methods, D)  # noqa: E731
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(work, points))
    else:
        chunks = [work(pp) for pp in points]
    return [row for chunk in chunks for row in chunk]


def run_steady(cfg, dim_override=None):
    p = params_from(cfg)
    D = dim_from(cfg, dim_override)
    ss = oracle.steady_state(p, D)
    pops = observables.number_distribution(ss)
    ratios = pops[1:11] / pops[:10]
    return {
        "params": {"mu": p.mu, "nu": p.nu, "omega": p.omega},
        "dim": D,
        "mean_photon": observables.mean_photon(ss),
        "expected_mean_photon": p.nu / (p.mu - p.nu),
        "level_ratios": ratios.tolist(),
        "expected_ratio": p.nu / p.mu,
        "max_offdiagonal": float(np.max(np.abs(ss.matrix - np.diag(np.diag(ss.matrix))))),
        "residual": ss.meta["residual"],
        "rcond": ss.meta["rcond"],
    }


def build_parser():
    parser = argparse.ArgumentParser(prog="dampedosc", description="Quantum damped harmonic oscillator toolkit")
    parser.add_argument("--quiet", action="store_true", help="suppress progress messages")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, config_required=True):
        sp.add_argument("--config", required=config_required, help="JSON config path")
        sp.add_argument("--dim", type=int, default=None, help="override the truncation dimension")
        sp.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)

    ev = sub.add_parser("evolve", help="evolve one initial state with the chosen methods")
    common(ev)
    sw = sub.add_parser("sweep", help="grid sweep over mu, nu, omega, |alpha|, t")
    common(sw)
    sw.add_argument("--jobs", type=int, default=1, help="worker threads")
    st = sub.add_parser("steady", help="steady-state diagnostics from the dense null-space solve")
    common(st)
    ve = sub.add_parser("verify", help="run a seeded verification suite")
    ve.add_argument("suite", choices=suites.SUITES)
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--output", default=None, help="report path (default: stdout)")
    ve.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s")
    try:
        if args.command == "verify":
            checks = suites.run(args.suite, args.seed)
            ok = all(c["passed"] for c in checks)
            write_json(args.output, {"suite": args.suite, "seed": args.seed, "passed": ok, "checks": checks})
            for c in checks:
                log.info("%s %s max_dev=%.3e tol=%.0e", "PASS" if c["passed"] else "FAIL", c["name"], c["max_deviation"], c["tol"])
            return EXIT_OK if ok else EXIT_FAILED
        cfg = load_config(args.config)
        out = cfg.get("output", {})
        if args.command == "evolve":
            rows, summary = run_evolve(cfg, args.dim)
            write_csv(out.get("csv_path"), CSV_COLUMNS, rows)
            if out.get("json_path"):
                write_json(out["json_path"], summary)
            log.info("evolve: %d rows, trace distances %s", len(rows), summary["trace_distance"])
        elif args.command == "sweep":
            rows = run_sweep(cfg, args.dim, args.jobs)
            write_csv(out.get("csv_path"), SWEEP_COLUMNS, rows)
            log.info("sweep: %d rows (%d skipped)", len(rows), sum(1 for r in rows if r.get("skipped")))
        else:
            write_json(out.get("json_path"), run_steady(cfg, args.dim))
    except TruncationError as exc:
        log.error("under-truncation: %s", exc)
        return EXIT_TRUNCATION
    except (oracle.IntegrationError, np.linalg.LinAlgError) as exc:
        log.error("invariant failure: %s", exc)
        return EXIT_FAILED
    except (ConfigError, ValueError, KeyError, TypeError) as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
