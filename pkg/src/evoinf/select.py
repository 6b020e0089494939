"""Static top-K seed selection baselines.

`greedy_select` is the hill-climbing algorithm: K rounds, each adding the
node with the largest estimated marginal spread. Estimates reuse one fixed
set of live-edge samples for the whole selection, which makes the estimated
objective genuinely monotone and submodular, so the lazy (priority-queue)
evaluation provably selects the same sequence as exhaustive re-evaluation.

`mia_select` ranks nodes by localized spread over theta-truncated regions
and discounts nodes already covered by chosen seeds.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from heapq import heappush, heappop

import numpy as np

from .errors import EmptyGraph
from .graph import Snapshot
from .localize import (LocalRegion, activation_prob, local_region,
                       region_weighted_sum)


@dataclass
class SeedResult:
    """Ordered seed set with the marginal gain recorded at selection time."""
    seeds: list[int]
    marginal_gains: list[float]
    algorithm: str
    wall_time: float
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "seeds": self.seeds,
            "marginal_gains": self.marginal_gains,
            "wall_time": self.wall_time,
            "params": self.params,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SeedResult":
        return cls(list(d["seeds"]), list(d["marginal_gains"]),
                   d.get("algorithm", "?"), float(d.get("wall_time", 0.0)),
                   dict(d.get("params", {})))


def _check_nonempty(g: Snapshot):
    if g.num_nodes == 0:
        raise EmptyGraph("selection on an empty graph")


class LiveEdgeEstimator:
    """Spread estimator over one fixed set of live-edge draws.

    sigma(S) is the mean, over the drawn samples, of the node count
    reachable from S. For fixed samples that function is monotone and
    submodular exactly, and estimates are cached per seed set so every
    caller sees identical floats.
    """

    def __init__(self, g: Snapshot, runs: int, master_seed: int,
                 chunk_cells: int = 20_000_000):
        self.runs = runs
        self.n = g.num_nodes
        self._nodes = sorted(g.nodes())
        self._index = {u: i for i, u in enumerate(self._nodes)}
        edge_list = sorted(g.edges())
        m = len(edge_list)
        self._src = np.array([self._index[u] for u, _, _ in edge_list],
                             dtype=np.int64)
        self._dst = np.array([self._index[v] for _, v, _ in edge_list],
                             dtype=np.int64)
        probs = np.array([p for _, _, p in edge_list])
        rng = np.random.Generator(np.random.Philox(key=master_seed))
        self._chunks: list[np.ndarray] = []
        rows_per_chunk = max(1, chunk_cells // max(m, 1))
        done = 0
        while done < runs:
            rows = min(rows_per_chunk, runs - done)
            if m:
                self._chunks.append(rng.random((rows, m)) < probs)
            else:
                self._chunks.append(np.zeros((rows, 0), dtype=bool))
            done += rows
        self._cache: dict[frozenset, float] = {}

    def sigma(self, seed_set: frozenset) -> float:
        got = self._cache.get(seed_set)
        if got is not None:
            return got
        if not seed_set:
            self._cache[seed_set] = 0.0
            return 0.0
        seed_idx = np.array(sorted(self._index[s] for s in seed_set),
                            dtype=np.int64)
        total = 0
        for live in self._chunks:
            rows = live.shape[0]
            active = np.zeros((rows, self.n), dtype=bool)
            active[:, seed_idx] = True
            changed = True
            while changed:
                changed = False
                for e in range(live.shape[1]):
                    new = (live[:, e] & active[:, self._src[e]]
                           & ~active[:, self._dst[e]])
                    if new.any():
                        active[:, self._dst[e]] |= new
                        changed = True
            total += int(active.sum())
        val = total / self.runs
        self._cache[seed_set] = val
        return val

    def marginal(self, v: int, seed_set: frozenset) -> float:
        return self.sigma(seed_set | {v}) - self.sigma(seed_set)


def greedy_select(g: Snapshot, k: int, runs: int, master_seed: int,
                  lazy: bool = True,
                  estimator: LiveEdgeEstimator | None = None) -> SeedResult:
    """Hill-climbing greedy selection with lazy marginal re-evaluation.

    `lazy=False` forces exhaustive re-evaluation every round; with a shared
    estimator both modes return the identical seed sequence. Ties break to
    the smaller node id.
    """
    _check_nonempty(g)
    t0 = time.perf_counter()
    est = estimator or LiveEdgeEstimator(g, runs, master_seed)
    k = min(k, g.num_nodes)
    seeds: list[int] = []
    gains: list[float] = []
    chosen: frozenset = frozenset()

    if lazy:
        # entries: (-gain, node, n_seeds_when_computed)
        heap: list[tuple[float, int, int]] = []
        for v in sorted(g.nodes()):
            heappush(heap, (-est.marginal(v, chosen), v, 0))
        while len(seeds) < k:
            neg, v, at = heappop(heap)
            if at == len(seeds):
                seeds.append(v)
                gains.append(-neg)
                chosen = chosen | {v}
            else:
                heappush(heap, (-est.marginal(v, chosen), v, len(seeds)))
    else:
        remaining = sorted(g.nodes())
        while len(seeds) < k:
            best_v, best_gain = None, None
            for v in remaining:
                gain = est.marginal(v, chosen)
                if best_gain is None or gain > best_gain:
                    best_v, best_gain = v, gain
            seeds.append(best_v)
            gains.append(best_gain)
            chosen = chosen | {best_v}
            remaining.remove(best_v)

    return SeedResult(seeds, gains, "greedy", time.perf_counter() - t0,
                      {"k": k, "runs": runs, "seed": master_seed,
                       "lazy": lazy})


class MiaSelector:
    """Incrementally maintained localized-spread gains over one graph.

    A candidate's gain sum_j prob(v->j) * (1 - ap(j, S)) is kept as
    base(v) - penalty(v): the seed-independent region sum, minus the
    accumulated coverage sum_j prob(v->j) * ap(j, S). When a new seed
    changes ap(j) for the nodes j it reaches, the penalty of every node
    that reaches j absorbs the difference, so no gain is ever recomputed
    from scratch and no region is searched twice.
    """

    def __init__(self, g, theta: float):
        self.g = g
        self.theta = theta
        self.seeds: list[int] = []
        self._seed_set: set[int] = set()
        self._ap: dict[int, float] = {}
        self._base: dict[int, float] = {}
        self._penalty: dict[int, float] = {}
        self._in_cache: dict[int, LocalRegion] = {}

    def _out_region(self, v: int) -> LocalRegion:
        return local_region(self.g, v, "out", self.theta)

    def _in_region(self, j: int) -> LocalRegion:
        got = self._in_cache.get(j)
        if got is None:
            got = local_region(self.g, j, "in", self.theta)
            self._in_cache[j] = got
        return got

    def gain(self, v: int) -> float:
        base = self._base.get(v)
        if base is None:
            base = region_weighted_sum(self._out_region(v), {})
            self._base[v] = base
        return base - self._penalty.get(v, 0.0)

    def add_seed(self, s: int) -> None:
        self.seeds.append(s)
        self._seed_set.add(s)
        for j in sorted(self._out_region(s).members):
            in_r = self._in_region(j)
            new_ap = activation_prob(in_r, self._seed_set)
            old_ap = self._ap.get(j, 0.0)
            if new_ap == old_ap:
                continue
            self._ap[j] = new_ap
            diff = new_ap - old_ap
            penalty = self._penalty
            for v, entry in in_r.members.items():
                penalty[v] = penalty.get(v, 0.0) + entry[0] * diff

    def best(self, candidates) -> tuple[int, float]:
        """Argmax of gain over candidates; ties go to the smaller node id."""
        best_v, best_gain = None, None
        for v in sorted(candidates):
            if v in self._seed_set:
                continue
            gain = self.gain(v)
            if best_gain is None or gain > best_gain:
                best_v, best_gain = v, gain
        if best_v is None:
            raise EmptyGraph("no candidates left to select from")
        return best_v, best_gain


def mia_select(g, k: int, theta: float) -> SeedResult:
    """K rounds of argmax over localized marginal spread."""
    _check_nonempty(g)
    t0 = time.perf_counter()
    sel = MiaSelector(g, theta)
    k = min(k, g.num_nodes)
    all_nodes = sorted(g.nodes())
    gains: list[float] = []
    for _ in range(k):
        v, gain = sel.best(all_nodes)
        sel.add_seed(v)
        gains.append(gain)
    return SeedResult(sel.seeds, gains, "mia", time.perf_counter() - t0,
                      {"k": k, "theta": theta})


def degree_select(g: Snapshot, k: int) -> SeedResult:
    """Top-K nodes by out-degree, ties to the smaller node id."""
    _check_nonempty(g)
    t0 = time.perf_counter()
    k = min(k, g.num_nodes)
    ranked = sorted(g.nodes(), key=lambda u: (-g.out_degree(u), u))
    seeds = ranked[:k]
    gains = [float(g.out_degree(u)) for u in seeds]
    return SeedResult(seeds, gains, "degree", time.perf_counter() - t0,
                      {"k": k})


def random_select(g: Snapshot, k: int, master_seed: int) -> SeedResult:
    """Uniform sample of K distinct nodes, deterministic in master_seed."""
    _check_nonempty(g)
    t0 = time.perf_counter()
    k = min(k, g.num_nodes)
    rng = random.Random(master_seed)
    seeds = rng.sample(sorted(g.nodes()), k)
    return SeedResult(seeds, [0.0] * k, "random", time.perf_counter() - t0,
                      {"k": k, "seed": master_seed})
