"""Seeded experiment runners behind the command line.

Every trial draws from its own generator ``trial_rng(seed, index)``; results
are merged in trial order, so the output does not depend on how trials are
split across worker processes.  Tables are plain dicts with exact integers
and ``Fraction`` values kept exact until serialization.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import entropy, geometry, moments, spin
from . import network as nw

SCHEMA = 1
RESIDUAL_TOLERANCE = 2  # log_p units, for the four-party residual window

BUILTIN_GRAPHS = {
    "star": nw.star_graph,
    "cross": nw.cross_graph,
    "grid": nw.grid_graph,
    "path": nw.path_graph,
    "bell": nw.bell_lattice,
    "dumbbell": nw.dumbbell_graph,
}

DEFAULT_GRAPH = {"rt": "star", "ghz": "star", "fourpartite": "cross", "spinmodel": "star"}


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    regions: dict = field(default_factory=dict)
    seed: int = 0
    trials: int = 1000
    p: int | None = None
    N: int | None = None
    out: str | None = None
    format: str = "json"
    workers: int = 1


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for one trial.

    ``SeedSequence`` hashes the pair ``(seed, index)`` into the generator
    state, so streams for neighbouring indices are uncorrelated.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed) % (1 << 64), int(index)]))


def resolve_graph(cfg: RunConfig):
    """``(graph, regions)`` from a file, a builtin name, or the command default."""
    name = cfg.graph or DEFAULT_GRAPH.get(cfg.command, "star")
    if name in BUILTIN_GRAPHS:
        G, regions = BUILTIN_GRAPHS[name](cfg.p or 2, cfg.N or 1)
    else:
        G, regions = nw.load_graph(name)
        if cfg.p or cfg.N:
            G = G.with_params(cfg.p, cfg.N)
        regions = regions or {b: [b] for b in G.boundary}
    if cfg.regions:
        regions = {k: list(v) for k, v in cfg.regions.items()}
        for reg in regions.values():
            nw.boundary_subsystem(G, reg)
    return G, regions


def _partition(G, regions, k):
    """The first ``k`` regions, which must partition the boundary."""
    parts = list(regions.values())[:k]
    if len(parts) < k or sorted(sum(parts, [])) != sorted(G.boundary):
        if len(G.boundary) == k:
            return [[b] for b in G.boundary]
        raise ValueError(f"need {k} regions partitioning the boundary")
    return parts


# --- trial functions (module level so they pickle) --------------------------

def _trial_rt(G, regions, rng):
    st = nw.build_random_network(G, rng)
    if st.is_zero:
        return {"nonzero": False}
    S = {k: entropy.entropy(st.tableau, st.region(r)) for k, r in regions.items()}
    return {"nonzero": True, "trace_level": st.trace_level, "S": S}


def _trial_ghz(G, regions, rng):
    A, B, C = _partition(G, regions, 3)
    st = nw.build_random_network(G, rng)
    if st.is_zero:
        return {"nonzero": False}
    gc = entropy.ghz_content(st.tableau, st.region(A), st.region(B), st.region(C))
    return {"nonzero": True, "trace_level": st.trace_level,
            "a": gc.a, "b": gc.b, "c": gc.c, "g": gc.g}


def _trial_fourpartite(G, regions, rng):
    parts = _partition(G, regions, 4)
    st = nw.build_random_network(G, rng)
    if st.is_zero:
        return {"nonzero": False}
    rep = entropy.fourpartite_report(st.tableau, [st.region(r) for r in parts])
    return {"nonzero": True, "trace_level": st.trace_level,
            "t": np.asarray(rep.t).tolist(), "i3": int(rep.i3),
            "residuals": [int(x) for x in rep.residual_entropies],
            "g_max": int(rep.g_max)}


def _trial_spinmodel(G, regions, rng):
    A, B, _ = _partition(G, regions, 3)
    st = nw.build_random_network(G, rng)
    if st.is_zero:
        return {"nonzero": False, "moment": Fraction(0)}
    m = entropy.pt_moment3(st.tableau, st.region(A), st.region(B))
    return {"nonzero": True, "trace_level": st.trace_level,
            "moment": Fraction(G.p) ** (3 * st.log_trace - m)}


TRIALS = {
    "rt": _trial_rt,
    "ghz": _trial_ghz,
    "fourpartite": _trial_fourpartite,
    "spinmodel": _trial_spinmodel,
}


def _run_chunk(args):
    kind, gdict, regions, seed, start, stop = args
    G, _ = nw.load_graph(gdict)
    fn = TRIALS[kind]
    out = []
    for i in range(start, stop):
        row = fn(G, regions, trial_rng(seed, i))
        row["trial"] = i
        out.append(row)
    return out


def run_trials(kind, G, regions, seed, trials, workers=1):
    """Per-trial dicts in trial order."""
    gdict = nw.graph_to_dict(G, regions)
    if workers <= 1 or trials < 2 * workers:
        return _run_chunk((kind, gdict, regions, seed, 0, trials))
    bounds = np.linspace(0, trials, 4 * workers + 1).astype(int)
    jobs = [(kind, gdict, regions, seed, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])]
    with ProcessPoolExecutor(workers) as ex:
        chunks = list(ex.map(_run_chunk, jobs))
    return [r for c in chunks for r in c]


# --- statistics --------------------------------------------------------------

def mean_se(xs):
    """Mean and standard error with a fixed, order-independent reduction."""
    n = len(xs)
    if n == 0:
        return None, None
    mu = math.fsum(xs) / n
    if n < 2:
        return mu, None
    var = math.fsum((x - mu) ** 2 for x in xs) / (n - 1)
    return mu, math.sqrt(var / n)


def _conditioned(rows, key):
    nz = [float(key(r)) for r in rows if r["nonzero"]]
    mt = [float(key(r)) for r in rows if r["nonzero"] and r["trace_level"] == 0]
    m1, s1 = mean_se(nz)
    m2, s2 = mean_se(mt)
    return {"mean_nonzero": m1, "se_nonzero": s1, "n_nonzero": len(nz),
            "mean_minimal": m2, "se_minimal": s2, "n_minimal": len(mt)}


def epsilon(G) -> Fraction:
    return Fraction(2 ** len(G.vertices), G.p ** G.N)


# --- experiments ---------------------------------------------------------------

def rt_experiment(G, regions, seed=0, trials=1000, workers=1):
    """Sampled entropies against the minimal-cut prediction for every region."""
    rows_t = run_trials("rt", G, regions, seed, trials, workers)
    eps = epsilon(G)
    table = []
    for name, reg in regions.items():
        cut = geometry.min_cut(G, reg)
        stats = _conditioned(rows_t, lambda r: r["S"][name])
        count = cut.num_min_cuts
        lower = None
        if count is not None:
            lower = cut.s_rt - math.log(count, G.p) - 4 * float(eps)
        mean = stats["mean_nonzero"]
        table.append({
            "region": name,
            "S_RT": cut.s_rt,
            "num_min_cuts": count,
            **stats,
            "gap": None if mean is None else cut.s_rt - mean,
            "lower_bound": lower,
            "within_bound": None if mean is None or lower is None
            else bool(lower - 1e-12 <= mean <= cut.s_rt + 1e-12),
        })
    summary = {
        "epsilon": eps,
        "nonzero_fraction": sum(r["nonzero"] for r in rows_t) / trials,
        "minimal_trace_fraction": sum(r["nonzero"] and r["trace_level"] == 0 for r in rows_t) / trials,
        "all_within_bound": all(r["within_bound"] is not False for r in table),
    }
    return table, summary


def ghz_experiment(G, regions, seed=0, trials=1000, workers=1):
    A, B, C = _partition(G, regions, 3)
    rows = run_trials("ghz", G, regions, seed, trials, workers)
    stats = _conditioned(rows, lambda r: r["g"])
    try:
        bound = spin.theorem1_bound(G, A, B, C)
        bound_d = {"value": bound.value, "num_b": bound.num_b,
                   "num_A": bound.num_A, "num_B": bound.num_B, "num_C": bound.num_C,
                   "delta": bound.delta}
    except (geometry.EnumerationCapError, ValueError) as exc:
        bound, bound_d = None, {"error": str(exc)}
    gs = [r["g"] for r in rows if r["nonzero"]]
    mean, se = stats["mean_nonzero"], stats["se_nonzero"]
    ok = None
    if bound is not None and mean is not None:
        ok = bool(mean - 3 * (se or 0.0) <= bound.value)
    summary = {**stats, "theorem1_bound": bound_d, "max_g": max(gs) if gs else None,
               "within_3sigma": ok}
    return rows, summary


def fourpartite_experiment(G, regions, seed=0, trials=1000, workers=1,
                           tolerance=RESIDUAL_TOLERANCE):
    rows = run_trials("fourpartite", G, regions, seed, trials, workers)
    nz = [r for r in rows if r["nonzero"]]
    devs = [max(abs(x + r["i3"] / 2) for x in r["residuals"]) for r in nz]
    within = sum(d <= tolerance for d in devs)
    summary = {
        "n_nonzero": len(nz),
        "residual_tolerance": tolerance,
        "max_residual_deviation": max(devs) if devs else None,
        "fraction_within_tolerance": within / len(nz) if nz else None,
        "monogamy_violations": sum(r["i3"] > 3 * r["g_max"] for r in nz),
        "i3_positive_without_ghz": sum(r["i3"] > 0 and r["g_max"] == 0 for r in nz),
        **{k: v for k, v in _conditioned(rows, lambda r: r["i3"]).items()},
    }
    return rows, summary


def spinmodel_experiment(G, regions, seed=0, trials=1000, workers=1):
    """Exact spin-model prediction against a Monte Carlo estimate of the moment."""
    A, B, C = _partition(G, regions, 3)
    pred = spin.moment_prediction(G, A, B, C)
    gs = spin.ground_state(G, A, B, C)
    row = {
        "E0": gs.E0,
        "degeneracy": gs.degeneracy,
        "moment_prediction": pred.value,
        "careful_bound": pred.careful_bound,
        "prediction_le_bound": pred.value <= pred.careful_bound,
        "formula_valid": pred.formula_valid,
        "partition_sum": pred.partition_sum,
    }
    if G.p == 2:
        row["s3_partition_sum"] = spin.s3_partition_sum(G, A, B, C)
    try:
        cuts = [geometry.min_cut(G, R) for R in (A, B, C)]
        row["sum_S_RT"] = sum(c.s_rt for c in cuts)
        row["degeneracy_bound"] = ((G.p + 1) ** geometry.max_residual_components(G, A, B, C)[0]
                                   * math.prod(c.num_min_cuts for c in cuts))
    except geometry.EnumerationCapError:
        pass
    summary = dict(row)
    if trials > 0:
        rows_t = run_trials("spinmodel", G, regions, seed, trials, workers)
        vals = [float(r["moment"]) for r in rows_t]
        mu, se = mean_se(vals)
        z = (mu - float(pred.value)) / se if se else None
        row.update({"trials": trials, "mc_mean": mu, "mc_se": se, "z": z})
        summary.update({"mc_mean": mu, "mc_se": se, "z": z})
    return [row], summary


DEFAULT_MOMENT_CASES = ((2, 1), (2, 2), (3, 2))


def moments_experiment(cases=DEFAULT_MOMENT_CASES, seed=0, samples=50):
    rows = []
    for p, n in cases:
        rep = moments.third_moment_report(n, p)
        rows.append({"check": "third_moment_exhaustive", **asdict(rep), "passed": rep.passed})
        if n >= 2:
            rep = moments.commutant_check(n, p, samples, trial_rng(seed, 1000 * p + n))
            rows.append({"check": "commutant", **asdict(rep), "passed": rep.passed})
            rows.append({"check": "independence", "n": n, "p": p,
                         "passed": moments.independence_check(n, p)})
    summary = {"all_passed": all(r["passed"] for r in rows)}
    return rows, summary


def run(cfg: RunConfig):
    """Dispatch a table-producing command; returns the output document."""
    if cfg.command == "moments":
        rows, summary = moments_experiment(seed=cfg.seed)
        config = asdict(cfg)
    else:
        G, regions = resolve_graph(cfg)
        fn = {"rt": rt_experiment, "ghz": ghz_experiment,
              "fourpartite": fourpartite_experiment, "spinmodel": spinmodel_experiment}[cfg.command]
        rows, summary = fn(G, regions, cfg.seed, cfg.trials, cfg.workers)
        config = {**asdict(cfg), "graph_data": nw.graph_to_dict(G, regions)}
    config.pop("workers")  # never affects output
    config.pop("out")
    if cfg.command == "fourpartite":
        config["residual_tolerance"] = RESIDUAL_TOLERANCE
    return {"config": config, "rows": rows, "summary": summary, "schema": SCHEMA}


# --- serialization -------------------------------------------------------------

def _plain(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    return x


def to_json(doc) -> str:
    return json.dumps(_plain(doc), indent=2) + "\n"


def to_csv(doc) -> str:
    rows = _plain(doc["rows"])
    cols = []
    for r in rows:
        cols += [k for k in r if k not in cols]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([json.dumps(r[c]) if isinstance(r.get(c), (list, dict)) else
                    ("" if r.get(c) is None else r[c]) for c in cols])
    return buf.getvalue()
