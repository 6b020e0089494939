"""Benchmark harness: run selection algorithms across snapshot transitions.

Scenarios are flat key=value files (# comments allowed). The instance either
comes from the synthetic generator (gen.* keys) or from a temporal edge list
with explicit snapshot times. Every algorithm row within a scenario is
evaluated with the same Monte-Carlo seed so spread columns are comparable.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field

from .errors import ScenarioError
from .generate import GenConfig, generate_evolving
from .graph import Snapshot
from .incremental import EvolutionContext, PruneConfig, incinf_select
from .ingest import load_temporal_edges, parse_prob_policy, snapshot_at
from .select import (SeedResult, degree_select, greedy_select, mia_select,
                     random_select)
from .simulate import simulate_spread

SCHEMA_VERSION = 1
ALGORITHMS = ("greedy", "mia", "degree", "random", "incinf")

CSV_COLUMNS = [
    "transition", "from_label", "to_label", "nodes", "edges", "algorithm",
    "k", "theta", "eta", "wall_time_s", "spread_mean", "spread_stderr",
    "eval_runs", "eval_seed", "prune_ratio_mean", "prune_ratios", "seeds",
]


@dataclass
class Scenario:
    algos: list[str]
    k: int
    theta: float
    eta: float
    eval_runs: int
    eval_seed: int
    select_runs: int = 10_000   # greedy's per-estimate sample count
    select_seed: int = 0
    gen: GenConfig | None = None
    edges_file: str | None = None
    snapshot_times: list[int] = field(default_factory=list)
    prob_policy: str = "trivalency"
    prob_seed: int = 0
    undirected: bool = False


def parse_scenario(path) -> Scenario:
    raw: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ScenarioError(text, f"line {line_no} is not key=value")
            key, value = text.split("=", 1)
            raw[key.strip()] = value.strip()

    def need(key: str) -> str:
        if key not in raw:
            raise ScenarioError(key, "missing")
        return raw[key]

    def geti(key: str, default=None) -> int:
        val = raw.get(key)
        if val is None:
            if default is None:
                raise ScenarioError(key, "missing")
            return default
        try:
            return int(val)
        except ValueError:
            raise ScenarioError(key, f"not an integer: {val!r}")

    def getf(key: str, default=None) -> float:
        val = raw.get(key)
        if val is None:
            if default is None:
                raise ScenarioError(key, "missing")
            return default
        try:
            return float(val)
        except ValueError:
            raise ScenarioError(key, f"not a number: {val!r}")

    algos = [a.strip() for a in need("algos").split(",") if a.strip()]
    for a in algos:
        if a not in ALGORITHMS:
            raise ScenarioError("algos", f"unknown algorithm {a!r}")
    if not algos:
        raise ScenarioError("algos", "empty")

    sc = Scenario(
        algos=algos,
        k=geti("k"),
        theta=getf("theta"),
        eta=getf("eta", 0.05),
        eval_runs=geti("eval_runs", 10_000),
        eval_seed=geti("eval_seed"),
        select_runs=geti("select_runs", 10_000),
        select_seed=geti("select_seed", 0),
    )
    if sc.k < 1:
        raise ScenarioError("k", "must be >= 1")
    if not (0.0 < sc.theta < 1.0):
        raise ScenarioError("theta", "must be in (0, 1)")

    if "gen.n0" in raw:
        sc.gen = GenConfig(
            n0=geti("gen.n0"),
            steps=geti("gen.steps"),
            nodes_per_step=geti("gen.nodes_per_step"),
            m=geti("gen.m"),
            prob_policy=raw.get("gen.prob_policy", "trivalency"),
            master_seed=geti("gen.seed", 0),
            extra_edge_fraction=getf("gen.extra_edge_fraction", 0.0),
            remove_edge_fraction=getf("gen.remove_edge_fraction", 0.0),
            weight_change_fraction=getf("gen.weight_change_fraction", 0.0),
            remove_node_count=geti("gen.remove_node_count", 0),
        )
    elif "edges_file" in raw:
        sc.edges_file = need("edges_file")
        times = need("snapshot_times")
        try:
            sc.snapshot_times = [int(t) for t in times.split(",")]
        except ValueError:
            raise ScenarioError("snapshot_times", f"bad list: {times!r}")
        if len(sc.snapshot_times) < 2:
            raise ScenarioError("snapshot_times", "need at least two times")
        sc.prob_policy = raw.get("prob_policy", "trivalency")
        sc.prob_seed = geti("prob_seed", 0)
        sc.undirected = raw.get("undirected", "false").lower() == "true"
    else:
        raise ScenarioError("gen.n0/edges_file",
                            "scenario needs a gen.* block or an edges_file")
    return sc


def _load_snapshots(sc: Scenario) -> list[Snapshot]:
    if sc.gen is not None:
        snapshots, _ = generate_evolving(sc.gen)
        return snapshots
    records, _ = load_temporal_edges(sc.edges_file, undirected=sc.undirected)
    policy = parse_prob_policy(sc.prob_policy, sc.prob_seed)
    return [snapshot_at(records, t, policy) for t in sc.snapshot_times]


def _run_static(algo: str, g: Snapshot, sc: Scenario) -> SeedResult:
    if algo == "greedy":
        return greedy_select(g, sc.k, sc.select_runs, sc.select_seed)
    if algo == "mia":
        return mia_select(g, sc.k, sc.theta)
    if algo == "degree":
        return degree_select(g, sc.k)
    if algo == "random":
        return random_select(g, sc.k, sc.select_seed)
    raise ScenarioError("algos", f"unknown algorithm {algo!r}")


def run_benchmark(sc: Scenario) -> dict:
    """Execute the scenario; returns the full report as a dictionary."""
    snapshots = _load_snapshots(sc)
    rows: list[dict] = []
    prev_inc: SeedResult | None = None

    for idx in range(1, len(snapshots)):
        g_old, g_new = snapshots[idx - 1], snapshots[idx]
        ctx = None
        for algo in sc.algos:
            if algo == "incinf":
                if ctx is None:
                    ctx = EvolutionContext.from_snapshots(g_old, g_new)
                if prev_inc is None:
                    prev_inc = mia_select(g_old, sc.k, sc.theta)
                res = incinf_select(ctx, prev_inc, sc.k, sc.theta,
                                    PruneConfig(sc.eta, prev_inc.seeds),
                                    pad=True)
                prev_inc = res
            else:
                res = _run_static(algo, g_new, sc)
            est = simulate_spread(g_new, res.seeds, sc.eval_runs,
                                  sc.eval_seed)
            ratios = res.params.get("prune_ratios", [])
            rows.append({
                "transition": idx,
                "from_label": g_old.label,
                "to_label": g_new.label,
                "nodes": g_new.num_nodes,
                "edges": g_new.num_edges,
                "algorithm": algo,
                "k": sc.k,
                "theta": sc.theta,
                "eta": sc.eta if algo == "incinf" else "",
                "wall_time_s": round(res.wall_time, 6),
                "spread_mean": est.mean,
                "spread_stderr": est.std_error,
                "eval_runs": sc.eval_runs,
                "eval_seed": sc.eval_seed,
                "prune_ratio_mean": (round(sum(ratios) / len(ratios), 6)
                                     if ratios else ""),
                "prune_ratios": ";".join(f"{r:.6f}" for r in ratios),
                "seeds": ";".join(str(s) for s in res.seeds),
            })

    return {
        "schema_version": SCHEMA_VERSION,
        "generated_at": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "scenario": {
            "algos": sc.algos, "k": sc.k, "theta": sc.theta, "eta": sc.eta,
            "eval_runs": sc.eval_runs, "eval_seed": sc.eval_seed,
        },
        "rows": rows,
    }


def report_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
    writer.writeheader()
    for row in report["rows"]:
        writer.writerow({k: row.get(k, "") for k in CSV_COLUMNS})
    return buf.getvalue()


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2)
