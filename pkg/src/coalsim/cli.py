"""Command-line front end: config resolution, seeding, and CSV/JSON emission.

Every experiment is a pure function of its resolved config, so a config plus
master seed pins the output bytes.  Replica work is split into fixed-size
chunks whose sub-seeds depend only on the chunk index; the thread count
decides how many chunks run at once, never what they compute, which keeps
outputs byte-identical across thread counts.
"""

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.stats import norm as _norm

from . import __version__
from .diagnostics import (
    BetaPrimeLaw,
    c_tilde,
    cramer_wold_samples,
    ks_distance,
    moment_scaling,
    stein_factors,
)
from .increments import IncrementLaw
from .lineages import components_on_window, mrca_pair_batch, window_jumps
from .paths import (
    EMPIRICAL_SIGMA,
    EXACT_SIGMA,
    ColouringLaw,
    empirical_covariance,
    fbm_covariance,
    make_ensemble,
)
from .renewal import compute_renewal_weights
from .rng import KIND_CHUNK, as_seed, derive_key
from .seedbank import (
    SeedbankModel,
    seedbank_pair_batch,
    seedbank_pair_bias_bound,
    seedbank_pair_coalescence,
)
from .special import normal_cdf

SCHEMA_VERSION = 1
CHUNK_REPS = 4096
THREADS_ENV = "COALSIM_THREADS"

# keys that do not change what is computed; excluded from the config hash
_NON_SEMANTIC = {"config", "threads", "out", "summary", "csv",
                 "density_out", "qq_out", "cov_out"}


# -- config plumbing ---------------------------------------------------------


def _t_int(s):
    return int(str(s), 10)


def _t_float(s):
    return float(s)


def _t_str(s):
    return str(s)


def _t_floats(s):
    parts = [p for p in str(s).split(",") if p.strip()]
    if not parts:
        raise ValueError("empty list")
    return tuple(float(p) for p in parts)


def _t_ints(s):
    return tuple(int(p, 10) for p in str(s).split(",") if p.strip())


class Opt:
    """One resolvable option: flag, config-file key, type, default."""

    def __init__(self, name, typ, default, help, required=False):
        self.name = name
        self.typ = typ
        self.default = default
        self.help = help
        self.required = required

    @property
    def key(self):
        return self.name.replace("-", "_")


_COMMON = [
    Opt("config", _t_str, None, "key = value file; flags override it"),
    Opt("threads", _t_int, None,
        f"worker threads (default ${THREADS_ENV} or 1)"),
    Opt("seed", _t_int, 20260816, "64-bit master seed"),
]

_LAW = [
    Opt("alpha", _t_float, 0.39, "tail index in (0, 1/2)"),
    Opt("variant", _t_str, "pure-power",
        "increment law: pure-power | log-perturbed"),
    Opt("beta", _t_float, 0.0, "log-perturbation strength (log-perturbed)"),
]


def _read_config_file(path):
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(
                        f"{path}:{lineno}: expected 'key = value'")
                key, val = line.split("=", 1)
                values[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    return values


def _resolve(opts, args, parser):
    """Merge flag values over config-file values over defaults."""
    cfg = {}
    file_vals = {}
    if getattr(args, "config", None):
        try:
            file_vals = _read_config_file(args.config)
        except ValueError as exc:
            parser.error(str(exc))
    known = {o.key for o in opts}
    for key in file_vals:
        if key not in known:
            parser.error(f"config file: unknown key {key!r}")
    for opt in opts:
        val = getattr(args, opt.key, None)
        if val is None and opt.key in file_vals:
            try:
                val = opt.typ(file_vals[opt.key])
            except ValueError as exc:
                parser.error(f"config file: {opt.key}: {exc}")
        if val is None:
            val = opt.default
        if val is None and opt.required:
            parser.error(f"--{opt.name} is required")
        cfg[opt.key] = val
    if cfg.get("threads") is None:
        cfg["threads"] = int(os.environ.get(THREADS_ENV, "1"))
    if cfg["threads"] < 1:
        parser.error("--threads must be >= 1")
    return cfg


def _config_hash(cfg):
    semantic = {k: v for k, v in cfg.items() if k not in _NON_SEMANTIC}
    blob = "\n".join(f"{k}={semantic[k]!r}" for k in sorted(semantic))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


def _law_from(cfg, parser):
    try:
        if cfg["variant"] in ("pure-power", "pure"):
            return IncrementLaw.pure_power(cfg["alpha"])
        if cfg["variant"] in ("log-perturbed", "log"):
            return IncrementLaw.log_perturbed(cfg["alpha"], cfg["beta"])
    except ValueError as exc:
        parser.error(str(exc))
    parser.error(f"--variant: unknown increment law {cfg['variant']!r}")


def _colouring_from(spec, parser):
    name, _, arg = str(spec).partition(":")
    try:
        if name == "rademacher":
            return ColouringLaw.rademacher(float(arg) if arg else 0.5)
        if name == "uniform":
            return ColouringLaw.centered_uniform(float(arg) if arg else 1.0)
        if name == "twopoint":
            a, b, w = (float(p) for p in arg.split(","))
            return ColouringLaw.two_point(a, b, w)
    except ValueError as exc:
        parser.error(f"--colouring: {exc}")
    parser.error(f"--colouring: unknown law {spec!r} "
                 "(rademacher[:p] | uniform[:h] | twopoint:a,b,w)")


# -- output emission ---------------------------------------------------------


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % float(value)


def _atomic_write(path, text):
    # replacing a device node or pipe with a regular file would break it
    if os.path.exists(path) and not os.path.isfile(path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        return
    tmp = f"{path}.tmp.{os.getpid()}"
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path, experiment, cfg_hash, columns, rows):
    lines = [
        f"# coalsim {__version__}",
        f"# experiment {experiment}",
        f"# config-hash {cfg_hash}",
        ",".join(columns),
    ]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _jsonify(value):
    if isinstance(value, dict):
        return {k: _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonify(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def _write_summary(path, experiment, cfg, cfg_hash, wall, outputs, results):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "experiment": experiment,
        "config": _jsonify(cfg),
        "config_hash": cfg_hash,
        "wall_time_s": round(wall, 3),
        "outputs": outputs,
        "results": _jsonify(results),
    }
    _atomic_write(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _check(statistic, threshold, passed, protocol):
    return {
        "statistic": float(statistic),
        "threshold": float(threshold),
        "pass": bool(passed),
        "protocol": _jsonify(protocol),
    }


# -- replica scheduling ------------------------------------------------------


def _chunk_seeds(seed, n_chunks):
    master = as_seed(seed)
    return [int(derive_key(master, np.uint64(KIND_CHUNK), np.uint64(i)))
            for i in range(n_chunks)]


def _run_chunked(fn, reps, threads, seed):
    """fn(chunk_seed, chunk_reps) per fixed-size chunk, results in order."""
    sizes = [min(CHUNK_REPS, reps - s) for s in range(0, reps, CHUNK_REPS)]
    seeds = _chunk_seeds(seed, len(sizes))
    if threads <= 1:
        return [fn(s, r) for s, r in zip(seeds, sizes)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, s, r) for s, r in zip(seeds, sizes)]
        return [f.result() for f in futures]


def _map_replicas(fn, reps, threads):
    """fn(replica) for replica = 0..reps-1, results in replica order."""
    if threads <= 1:
        return [fn(r) for r in range(reps)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(reps)))


# -- experiments -------------------------------------------------------------


def _run_renewal(cfg, parser, cfg_hash):
    law = _law_from(cfg, parser)
    if cfg["n"] < 1:
        parser.error("--n must be >= 1")
    if cfg["mode"] not in ("fast", "naive"):
        parser.error("--mode must be fast or naive")
    table = compute_renewal_weights(law, cfg["n"], mode=cfg["mode"])
    cons = table.constants()
    rows = [(i, table.q[i]) for i in range(cfg["n"] + 1)]
    _write_csv(cfg["out"], "renewal", cfg_hash, ("n", "q"), rows)
    results = {
        "sum_q_sq": cons.sum_q_sq,
        "c_srt": cons.c_srt,
        "c_alpha": cons.c_alpha,
        "variance_constant": cons.variance_constant,
        "srt_ratio_at_n": table.srt_ratio(cfg["n"]),
    }
    return {"csv": cfg["out"]}, results


def _run_pair(cfg, parser, cfg_hash):
    law = _law_from(cfg, parser)
    gaps = cfg["gaps"]
    if not gaps or min(gaps) < 1:
        parser.error("--gaps must be positive integers")
    size = max(cfg["table_size"], 2 * max(gaps))
    table = compute_renewal_weights(law, size)
    cons = table.constants()
    rows = []
    for gap in gaps:
        exact = table.pair_coalescence(gap)
        asym = cons.c_alpha * float(gap) ** (2.0 * law.alpha - 1.0)
        rows.append((gap, exact, asym, exact / asym))
    _write_csv(cfg["out"], "pair", cfg_hash,
               ("gap", "exact", "asymptote", "ratio"), rows)
    return {"csv": cfg["out"]}, {"c_alpha": cons.c_alpha,
                                 "table_size": size}


def _run_simulate_components(cfg, parser, cfg_hash):
    law = _law_from(cfg, parser)
    n, reps = cfg["n"], cfg["reps"]
    if n < 1 or reps < 1:
        parser.error("--n and --reps must be >= 1")
    cutoff = int(round(cfg["cutoff_mult"] * n))

    def one(replica):
        part = components_on_window(law, n, cutoff=cutoff, seed=cfg["seed"],
                                    replica=replica)
        jumps, _ = window_jumps(law, 1, n + 1, seed=cfg["seed"],
                                replica=replica)
        return part.labels, jumps

    rows = []
    for replica, (labels, jumps) in enumerate(
            _map_replicas(one, reps, cfg["threads"])):
        for site in range(1, n + 1):
            rows.append((replica, site, site - int(jumps[site - 1]),
                         int(labels[site - 1]) + 1))
    _write_csv(cfg["out"], "simulate-components", cfg_hash,
               ("replica", "site", "parent", "component"), rows)
    return {"csv": cfg["out"]}, {"n": n, "reps": reps, "cutoff": cutoff}


def _mrca_batches(cfg, law):
    def one(chunk_seed, chunk_reps):
        return mrca_pair_batch(law, cfg["gap"], chunk_reps,
                               cutoff=cfg["cutoff"], seed=chunk_seed)
    return _run_chunked(one, cfg["reps"], cfg["threads"], cfg["seed"])


def _run_mrca(cfg, parser, cfg_hash):
    law = _law_from(cfg, parser)
    if cfg["gap"] < 1 or cfg["reps"] < 1 or cfg["cutoff"] < 1:
        parser.error("--gap, --reps and --cutoff must be >= 1")
    batches = _mrca_batches(cfg, law)
    met = np.concatenate([b.met for b in batches])
    depth = np.concatenate([b.depth for b in batches])
    rows = [(r, int(met[r]), int(depth[r])) for r in range(cfg["reps"])]
    _write_csv(cfg["out"], "mrca", cfg_hash,
               ("replica", "coalesced", "depth"), rows)
    size = max(4096, 2 * cfg["gap"])
    table = compute_renewal_weights(law, size)
    results = {
        "met_fraction": float(met.mean()),
        "exact": table.pair_coalescence(cfg["gap"]),
        "bias_bound": table.pair_bias_bound(cfg["gap"], cfg["cutoff"]),
    }
    return {"csv": cfg["out"]}, results


def _run_mrca_test(cfg, parser, cfg_hash):
    law = _law_from(cfg, parser)
    gap, reps = cfg["gap"], cfg["reps"]
    if gap < 1 or reps < 1:
        parser.error("--gap and --reps must be >= 1")
    upper = cfg["cutoff_mult"]
    if upper <= 0:
        parser.error("--cutoff-mult must be positive")
    cutoff = int(round(upper * gap))
    run_cfg = dict(cfg, cutoff=cutoff)
    batches = _mrca_batches(run_cfg, law)
    depths = np.concatenate([b.met_depths for b in batches])
    n_coalesced = depths.size
    bp = BetaPrimeLaw(law.alpha)
    scaled = depths.astype(np.float64) / gap
    ks = ks_distance(scaled, lambda x: bp.truncated_cdf_array(x, upper))
    passed = ks <= cfg["threshold"] and n_coalesced >= cfg["min_coalesced"]
    protocol = {"gap": gap, "reps": reps, "cutoff": cutoff,
                "seed": cfg["seed"], "n_coalesced": int(n_coalesced),
                "min_coalesced": cfg["min_coalesced"],
                "comparison": "beta-prime cdf conditioned on depth <= cutoff"}
    results = {"ks": _check(ks, cfg["threshold"], passed, protocol)}

    # companion curve for histogram overlays, clustered near the origin
    k = 512
    xs = upper * (np.arange(1, k + 1) / k) ** 2
    dens = np.array([bp.density(x) for x in xs])
    cdfs = bp.cdf_array(xs)
    trunc = bp.cdf(upper)
    rows = list(zip(xs, dens, dens / trunc, cdfs, cdfs / trunc))
    _write_csv(cfg["density_out"], "mrca-test", cfg_hash,
               ("x", "density", "truncated_density", "cdf", "truncated_cdf"),
               rows)
    return {"density_csv": cfg["density_out"]}, results


def _ensemble_from(cfg, parser, law, colour):
    n = cfg["n"]
    grid = cfg["grid"]
    if n < 2:
        parser.error("--n must be >= 2")
    if any(t <= 0 or t > 1 for t in grid) or list(grid) != sorted(set(grid)):
        parser.error("--grid must be ascending in (0, 1]")
    if cfg["normalization"] not in (EXACT_SIGMA, EMPIRICAL_SIGMA):
        parser.error("--normalization must be exact or empirical")
    table = compute_renewal_weights(law, max(2 * n, 8192))
    ensemble = make_ensemble(
        law, colour, n, grid, cfg["reps"], cutoff_mult=cfg["cutoff_mult"],
        normalization=cfg["normalization"], seed=cfg["seed"], table=table)
    return ensemble, table


def _run_paths(cfg, parser, cfg_hash):
    law = _law_from(cfg, parser)
    colour = _colouring_from(cfg["colouring"], parser)
    ensemble, _ = _ensemble_from(cfg, parser, law, colour)
    rows = []
    for replica in range(ensemble.reps):
        for j, t in enumerate(ensemble.grid):
            rows.append((replica, t, ensemble.values[replica, j]))
    _write_csv(cfg["out"], "paths", cfg_hash, ("replica", "t", "value"), rows)
    results = {"sigma": ensemble.sigma, "n_components_mean":
               float(np.mean(ensemble.n_components))}
    outputs = {"csv": cfg["out"]}
    if cfg["cov_out"]:
        target = fbm_covariance(ensemble.grid, 0.5 + law.alpha)
        cov_rows = []
        for a, s in enumerate(ensemble.grid):
            for b, t in enumerate(ensemble.grid):
                cov_rows.append((s, t, empirical_covariance(ensemble, s, t),
                                 target[a, b]))
        _write_csv(cfg["cov_out"], "paths", cfg_hash,
                   ("s", "t", "empirical", "limit"), cov_rows)
        outputs["cov_csv"] = cfg["cov_out"]
    return outputs, results


def _run_normality(cfg, parser, cfg_hash):
    law = _law_from(cfg, parser)
    colour = _colouring_from(cfg["colouring"], parser)
    ensemble, table = _ensemble_from(cfg, parser, law, colour)
    coeffs = cfg["cw_coeffs"]
    if len(coeffs) != len(ensemble.grid):
        parser.error("--cw-coeffs must match --grid length")
    end = ensemble.column(ensemble.grid[-1])
    combo = cramer_wold_samples(ensemble, table, coeffs)
    ks_end = ks_distance(end, normal_cdf)
    ks_combo = ks_distance(combo, normal_cdf)
    protocol = {"n": cfg["n"], "reps": cfg["reps"], "grid": list(cfg["grid"]),
                "cutoff_mult": cfg["cutoff_mult"], "seed": cfg["seed"],
                "colouring": cfg["colouring"],
                "normalization": cfg["normalization"]}
    results = {
        "ks_endpoint": _check(ks_end, cfg["threshold"],
                              ks_end <= cfg["threshold"], protocol),
        "ks_cramer_wold": _check(
            ks_combo, cfg["threshold"], ks_combo <= cfg["threshold"],
            dict(protocol, coeffs=list(coeffs))),
    }
    outputs = {}
    if cfg["qq_out"]:
        qs = (np.arange(1, 513) - 0.5) / 512
        sample_q = np.quantile(end, qs)
        rows = list(zip(_norm.ppf(qs), sample_q))
        _write_csv(cfg["qq_out"], "normality", cfg_hash,
                   ("normal_quantile", "sample_quantile"), rows)
        outputs["qq_csv"] = cfg["qq_out"]
    return outputs, results


def _run_scaling(cfg, parser, cfg_hash):
    law = _law_from(cfg, parser)
    grid = cfg["n_grid"]
    if len(grid) < 4 or any(g < 2 for g in grid):
        parser.error("--n-grid needs at least 4 window sizes >= 2")
    table = compute_renewal_weights(law, max(2 * max(grid), 8192))
    rep = moment_scaling(law, grid, cfg["reps"],
                         cutoff_mult=cfg["cutoff_mult"], seed=cfg["seed"],
                         table=table)
    a = law.alpha
    t2, t3, t4 = 2 * a + 1, 4 * a + 1 + 0.3, 6 * a + 1 + 0.3
    results = {
        "slope_s2": _check(rep.slope_s2, cfg["s2_band"],
                           abs(rep.slope_s2 - t2) <= cfg["s2_band"],
                           {"target": t2, "two_sided": True}),
        "slope_s3": _check(rep.slope_s3, t3, rep.slope_s3 <= t3,
                           {"one_sided": True}),
        "slope_s4": _check(rep.slope_s4, t4, rep.slope_s4 <= t4,
                           {"one_sided": True}),
        "slope_se": {"s2": rep.slope_se_s2, "s3": rep.slope_se_s3,
                     "s4": rep.slope_se_s4},
    }
    outputs = {}
    if cfg["csv"]:
        logn = np.log(np.asarray(grid, dtype=np.float64))
        fits = {}
        for name, mean in (("s2", rep.mean_s2), ("s3", rep.mean_s3),
                           ("s4", rep.mean_s4)):
            slope, intercept = np.polyfit(logn, np.log(mean), 1)
            fits[name] = np.exp(intercept + slope * logn)
        rows = []
        for i, n in enumerate(grid):
            rows.append((n, rep.mean_s2[i], rep.se_s2[i], fits["s2"][i],
                         rep.mean_s3[i], rep.se_s3[i], fits["s3"][i],
                         rep.mean_s4[i], rep.se_s4[i], fits["s4"][i],
                         rep.oracle_s2[i], rep.bias_bound_s2[i]))
        _write_csv(cfg["csv"], "scaling", cfg_hash,
                   ("n", "mean_s2", "se_s2", "fit_s2", "mean_s3", "se_s3",
                    "fit_s3", "mean_s4", "se_s4", "fit_s4", "oracle_s2",
                    "bias_bound_s2"), rows)
        outputs["csv"] = cfg["csv"]
    return outputs, results


def _run_stein(cfg, parser, cfg_hash):
    law = _law_from(cfg, parser)
    colour = _colouring_from(cfg["colouring"], parser)
    n = cfg["n"]
    if n < 2 or cfg["reps"] < 2:
        parser.error("--n must be >= 2 and --reps >= 2")
    rho = cfg["rho_grid"]
    weights = cfg["weights"]
    if len(rho) != len(weights):
        parser.error("--rho-grid and --weights must have equal length")
    table = compute_renewal_weights(law, max(2 * n, 8192))
    cutoff = int(round(cfg["cutoff_mult"] * n))
    factors = stein_factors(table, colour, n, cfg["reps"], cutoff=cutoff,
                            seed=cfg["seed"], rho_grid=rho, weights=weights)
    ct = c_tilde(table, n, rho, weights)
    protocol = {"n": n, "reps": cfg["reps"], "cutoff": cutoff,
                "seed": cfg["seed"], "rho_grid": list(rho),
                "weights": list(weights), "colouring": cfg["colouring"]}
    results = {
        "c_tilde": _check(ct, cfg["threshold"], ct >= cfg["threshold"],
                          protocol),
        "factor1": factors.factor1,
        "se_factor1": factors.se_factor1,
        "factor2": factors.factor2,
        "se_factor2": factors.se_factor2,
        "sigma_bar": factors.sigma_bar,
    }
    outputs = {}
    if cfg["csv"]:
        rows = [(n, cfg["reps"], factors.factor1, factors.se_factor1,
                 factors.factor2, factors.se_factor2, factors.sigma_bar, ct)]
        _write_csv(cfg["csv"], "stein", cfg_hash,
                   ("n", "reps", "factor1", "se_factor1", "factor2",
                    "se_factor2", "sigma_bar", "c_tilde"), rows)
        outputs["csv"] = cfg["csv"]
    return outputs, results


def _run_seedbank(cfg, parser, cfg_hash):
    law = _law_from(cfg, parser)
    if cfg["islands"] < 1:
        parser.error("--islands must be >= 1")
    if cfg["gap"] < 1 or cfg["reps"] < 1 or cfg["cutoff"] < 1:
        parser.error("--gap, --reps and --cutoff must be >= 1")
    model = SeedbankModel(law, cfg["islands"])
    table = compute_renewal_weights(law, max(4096, 2 * cfg["gap"]))

    def one(chunk_seed, chunk_reps):
        return seedbank_pair_batch(model, cfg["gap"], chunk_reps,
                                   cutoff=cfg["cutoff"], seed=chunk_seed)

    batches = _run_chunked(one, cfg["reps"], cfg["threads"], cfg["seed"])
    met = np.concatenate([b.met for b in batches])
    empirical = float(met.mean())
    exact = seedbank_pair_coalescence(model, table, cfg["gap"])
    bias = seedbank_pair_bias_bound(model, table, cfg["gap"], cfg["cutoff"])
    se = float(np.sqrt(exact * (1.0 - exact) / cfg["reps"]))
    threshold = 3.0 * se + bias
    protocol = {"islands": cfg["islands"], "gap": cfg["gap"],
                "reps": cfg["reps"], "cutoff": cfg["cutoff"],
                "seed": cfg["seed"], "exact": exact, "binomial_se": se,
                "bias_bound": bias}
    results = {"pair_deviation": _check(abs(empirical - exact), threshold,
                                        abs(empirical - exact) <= threshold,
                                        protocol),
               "empirical": empirical}
    outputs = {}
    if cfg["csv"]:
        rows = [(cfg["islands"], cfg["gap"], exact, empirical, se, bias)]
        _write_csv(cfg["csv"], "seedbank", cfg_hash,
                   ("islands", "gap", "exact", "empirical", "binomial_se",
                    "bias_bound"), rows)
        outputs["csv"] = cfg["csv"]
    return outputs, results


# -- command table -----------------------------------------------------------


_COMMANDS = {
    "renewal": {
        "help": "solve the renewal weights and report table constants",
        "opts": _LAW + [
            Opt("n", _t_int, 4096, "table size"),
            Opt("mode", _t_str, "fast", "solver: fast | naive"),
            Opt("out", _t_str, None, "output CSV path", required=True),
            Opt("summary", _t_str, None, "optional JSON summary path"),
        ],
        "run": _run_renewal,
    },
    "pair": {
        "help": "exact pair-coalescence probabilities against the asymptote",
        "opts": _LAW + [
            Opt("gaps", _t_ints, (1, 10, 100, 1000), "comma-separated gaps"),
            Opt("table-size", _t_int, 8192, "minimum renewal table size"),
            Opt("out", _t_str, None, "output CSV path", required=True),
            Opt("summary", _t_str, None, "optional JSON summary path"),
        ],
        "run": _run_pair,
    },
    "simulate-components": {
        "help": "ancestral window partitions with parent edges, per replica",
        "opts": _LAW + [
            Opt("n", _t_int, 100, "window size"),
            Opt("reps", _t_int, 1, "replica count"),
            Opt("cutoff-mult", _t_float, 1000.0, "cutoff = mult * n"),
            Opt("out", _t_str, None, "output CSV path", required=True),
            Opt("summary", _t_str, None, "optional JSON summary path"),
        ],
        "run": _run_simulate_components,
    },
    "mrca": {
        "help": "pairwise first-meeting depths, one row per replica",
        "opts": _LAW + [
            Opt("gap", _t_int, 100, "site gap"),
            Opt("reps", _t_int, 10_000, "replica pairs"),
            Opt("cutoff", _t_int, 100_000, "depth cutoff"),
            Opt("out", _t_str, None, "output CSV path", required=True),
            Opt("summary", _t_str, None, "optional JSON summary path"),
        ],
        "run": _run_mrca,
    },
    "mrca-test": {
        "summary_key": "out",
        "help": "KS test of rescaled meeting depths against the exact law",
        "opts": _LAW + [
            Opt("gap", _t_int, 2000, "site gap"),
            Opt("reps", _t_int, 100_000, "replica pairs"),
            Opt("cutoff-mult", _t_float, 200.0, "cutoff = mult * gap"),
            Opt("threshold", _t_float, 0.05, "KS acceptance threshold"),
            Opt("min-coalesced", _t_int, 5000, "required met sample size"),
            Opt("out", _t_str, None, "JSON summary path", required=True),
            Opt("density-out", _t_str, None, "companion density CSV path",
                required=True),
        ],
        "run": _run_mrca_test,
    },
    "paths": {
        "help": "standardized partial-sum paths on a time grid, long form",
        "opts": _LAW + [
            Opt("n", _t_int, 4096, "window size"),
            Opt("grid", _t_floats, (0.25, 0.5, 0.75, 1.0), "time grid"),
            Opt("reps", _t_int, 1000, "replica paths"),
            Opt("colouring", _t_str, "rademacher:0.5", "colouring law"),
            Opt("normalization", _t_str, EXACT_SIGMA, "exact | empirical"),
            Opt("cutoff-mult", _t_float, 100_000.0, "cutoff = mult * n"),
            Opt("out", _t_str, None, "output CSV path", required=True),
            Opt("cov-out", _t_str, None,
                "companion covariance CSV path (empirical vs limit)"),
            Opt("summary", _t_str, None, "optional JSON summary path"),
        ],
        "run": _run_paths,
    },
    "normality": {
        "summary_key": "out",
        "help": "KS gates for the standardized endpoint and a Cramer-Wold "
                "combination",
        "opts": _LAW + [
            Opt("n", _t_int, 4096, "window size"),
            Opt("grid", _t_floats, (0.5, 1.0), "time grid"),
            Opt("reps", _t_int, 10_000, "replica paths"),
            Opt("colouring", _t_str, "uniform:1.0", "colouring law"),
            Opt("normalization", _t_str, EXACT_SIGMA, "exact | empirical"),
            Opt("cutoff-mult", _t_float, 244140.625, "cutoff = mult * n"),
            Opt("cw-coeffs", _t_floats, (1.0, -1.0),
                "Cramer-Wold coefficients, one per grid time"),
            Opt("threshold", _t_float, 0.025, "KS acceptance threshold"),
            Opt("out", _t_str, None, "JSON summary path", required=True),
            Opt("qq-out", _t_str, None, "optional QQ-plot CSV path"),
        ],
        "run": _run_normality,
    },
    "scaling": {
        "summary_key": "out",
        "help": "component-moment scaling slopes over a window ladder",
        "opts": _LAW + [
            Opt("n-grid", _t_ints, (256, 512, 1024, 2048, 4096, 8192),
                "ascending window sizes"),
            Opt("reps", _t_int, 3000, "replicas per window size"),
            Opt("cutoff-mult", _t_float, 1_048_576.0, "cutoff = mult * n"),
            Opt("s2-band", _t_float, 0.15, "two-sided S2 slope band"),
            Opt("out", _t_str, None, "JSON summary path", required=True),
            Opt("csv", _t_str, None, "optional per-size CSV path"),
        ],
        "run": _run_scaling,
    },
    "stein": {
        "summary_key": "out",
        "help": "smooth-test factors and the coefficient positivity constant",
        "opts": _LAW + [
            Opt("n", _t_int, 2048, "window size"),
            Opt("reps", _t_int, 5000, "replicas"),
            Opt("colouring", _t_str, "rademacher:0.5", "colouring law"),
            Opt("rho-grid", _t_floats, (1.0,), "ascending block ends in "
                "(0, 1]"),
            Opt("weights", _t_floats, (1.0,), "one weight per block"),
            Opt("cutoff-mult", _t_float, 16_384.0, "cutoff = mult * n"),
            Opt("threshold", _t_float, 0.05, "positivity constant floor"),
            Opt("out", _t_str, None, "JSON summary path", required=True),
            Opt("csv", _t_str, None, "optional factor CSV path"),
        ],
        "run": _run_stein,
    },
    "seedbank": {
        "summary_key": "out",
        "help": "island-model pair coalescence, exact against Monte Carlo",
        "opts": _LAW + [
            Opt("islands", _t_int, 5, "island count N"),
            Opt("gap", _t_int, 20, "site gap"),
            Opt("reps", _t_int, 100_000, "replica pairs"),
            Opt("cutoff", _t_int, 100_000, "depth cutoff"),
            Opt("out", _t_str, None, "JSON summary path", required=True),
            Opt("csv", _t_str, None, "optional CSV path"),
        ],
        "run": _run_seedbank,
    },
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="coalsim",
        allow_abbrev=False,
        description="Exact oracles and Monte Carlo experiments for "
                    "long-range coalescing renewal genealogies.",
        epilog="Config files hold 'key = value' lines (flag names with "
               "dashes or underscores); flags override file values.")
    parser.add_argument("--version", action="version",
                        version=f"coalsim {__version__}")
    subs = parser.add_subparsers(dest="command", metavar="command")
    for name, spec in _COMMANDS.items():
        sub = subs.add_parser(name, help=spec["help"], allow_abbrev=False)
        for opt in _COMMON + spec["opts"]:
            sub.add_argument(f"--{opt.name}", type=str, default=None,
                             help=opt.help)
        spec["_parser"] = sub
    return parser, subs


def main(argv=None):
    parser, _ = _build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return 2
    spec = _COMMANDS[args.command]
    sub = spec["_parser"]

    # convert flag strings through the declared option types
    for opt in _COMMON + spec["opts"]:
        raw = getattr(args, opt.key, None)
        if raw is not None:
            try:
                setattr(args, opt.key, opt.typ(raw))
            except ValueError as exc:
                sub.error(f"--{opt.name}: {exc}")

    cfg = _resolve(_COMMON + spec["opts"], args, sub)
    cfg_hash = _config_hash(cfg)
    start = time.time()
    try:
        outputs, results = spec["run"](cfg, sub, cfg_hash)
    except (ValueError, MemoryError) as exc:
        print(f"coalsim {args.command}: {exc}", file=sys.stderr)
        return 1
    wall = time.time() - start

    summary_path = cfg.get(spec.get("summary_key", "summary"))
    if summary_path:
        outputs = dict(outputs, summary=summary_path)
        _write_summary(summary_path, args.command, cfg, cfg_hash, wall,
                       outputs, results)
    failed = [key for key, val in results.items()
              if isinstance(val, dict) and val.get("pass") is False]
    for key in failed:
        print(f"coalsim {args.command}: check {key} failed "
              f"(statistic {results[key]['statistic']:.6g}, "
              f"threshold {results[key]['threshold']:.6g})",
              file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
