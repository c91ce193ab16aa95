"""Sampling harness for large-n statistics.

Three engines produce the same kind of :class:`SimSummary`:

``network``
    Grow every network explicitly and measure it.  Any model, any statistic.
``memo``
    Small n.  Trials are pushed through a lazily built trie of network
    states, so each distinct history prefix is built once and whole groups of
    trials advance with one vectorised search on its cumulative weights.
    Bit-identical to ``network`` for the same seed and worker count.
``chain``
    Large n.  Each statistic is driven by a small Markov chain that tracks
    only what the statistic needs (for instance the source degree and the
    total selection weight of the source edges), vectorised across trials.

Streams: ``numpy.random.SeedSequence(seed).spawn(workers)`` gives one PCG64
stream per worker; trial ``t`` belongs to worker ``t % workers`` and partial
summaries are merged in worker order, so results depend only on
``(seed, workers, engine)``.

For the network and memo engines each trial reads one row of
``uniforms_per_step * (n - 1) + n`` uniforms: the growth stream described in
:mod:`spnet.network` followed by the uniforms of the random walk (one per
walk step).
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .network import (
    SINK,
    SOURCE,
    Model,
    ModelConfig,
    SPNetwork,
    count_paths,
    leftmost_path_length,
    selection_weights,
    sink_degree,
    source_degree,
)

STATS = ("source_degree", "sink_degree", "leftmost_length", "random_length", "path_count")
MAX_POWER = 6
DEFAULT_BUDGET = 5 * 10**9  # trials * n
CHUNK = 1 << 15
MEMO_CHUNK = 1 << 18
MEMO_MAX_N = 12


class ResourceBudgetError(ValueError):
    pass


# --- accumulators -----------------------------------------------------------


@dataclass
class StatAccumulator:
    """Histogram of an integer statistic; exact power sums derive from it."""

    hist: Counter = field(default_factory=Counter)

    @property
    def trials(self) -> int:
        return sum(self.hist.values())

    def add_values(self, values) -> None:
        if isinstance(values, np.ndarray):
            vals, counts = np.unique(values, return_counts=True)
            for v, c in zip(vals.tolist(), counts.tolist()):
                self.hist[int(v)] += int(c)
        else:
            self.hist.update(int(v) for v in values)

    def add_counts(self, value: int, count: int) -> None:
        self.hist[int(value)] += int(count)

    def merge(self, other: "StatAccumulator") -> "StatAccumulator":
        out = StatAccumulator(Counter(self.hist))
        out.hist.update(other.hist)
        return out

    def power_sum(self, r: int) -> int:
        return sum(c * v**r for v, c in self.hist.items())

    def mean(self) -> float:
        return self.power_sum(1) / self.trials

    def variance(self) -> float:
        t = self.trials
        if t < 2:
            return 0.0
        s1, s2 = self.power_sum(1), self.power_sum(2)
        # exact integer numerator keeps this nonnegative
        return (t * s2 - s1 * s1) / (t * (t - 1))

    def log_moments(self) -> tuple[float, float]:
        t = self.trials
        m1 = math.fsum(c * math.log(v) for v, c in self.hist.items()) / t
        m2 = math.fsum(c * math.log(v) ** 2 for v, c in self.hist.items()) / t
        return m1, max(m2 - m1 * m1, 0.0)

    def pmf(self) -> dict[int, float]:
        t = self.trials
        return {v: c / t for v, c in sorted(self.hist.items())}


def scaling_exponent(cfg: ModelConfig, stat: str) -> float | None:
    """Exponent gamma such that stat / n^gamma has a limit law."""
    m = cfg.model
    if m is Model.BERNOULLI:
        p = float(cfg.p)
        if stat in ("source_degree", "sink_degree"):
            return p
        if stat in ("leftmost_length", "random_length"):
            return 1 - p
    if m is Model.BINARY:
        if stat in ("leftmost_length", "random_length"):
            return (math.sqrt(5) - 1) / 2
        if stat == "sink_degree":
            return math.sqrt(2) - 1
    if m is Model.BARY and stat in ("leftmost_length", "random_length"):
        from .asymptotics import bary_spectrum

        return bary_spectrum(cfg.b).dominant
    if m is Model.PREFERENTIAL and stat == "source_degree":
        return (float(cfg.p) + 1) / 2
    if m is Model.SATURATION and stat == "source_degree" and float(cfg.p) > 0.5:
        return 2 * float(cfg.p) - 1
    return None


@dataclass
class SimSummary:
    cfg: ModelConfig
    n: int
    trials: int
    seed: int
    workers: int
    engine: str
    stats: dict[str, StatAccumulator]
    notes: dict[str, str] = field(default_factory=dict)

    def mean(self, stat: str) -> float:
        return self.stats[stat].mean()

    def variance(self, stat: str) -> float:
        return self.stats[stat].variance()

    def pmf(self, stat: str) -> dict[int, float]:
        return self.stats[stat].pmf()

    def scaled_moment(self, stat: str, r: int, gamma: float | None = None) -> tuple[float, float]:
        """(estimate, standard error) of E((X / n^gamma)^r)."""
        if gamma is None:
            gamma = scaling_exponent(self.cfg, stat)
            if gamma is None:
                raise ValueError(f"no scaling exponent for {stat} under {self.cfg.model.value}")
        acc = self.stats[stat]
        t = acc.trials
        scale = float(self.n) ** (gamma * r)
        m_r = acc.power_sum(r) / t
        m_2r = acc.power_sum(2 * r) / t
        var = max(m_2r - m_r * m_r, 0.0)
        return m_r / scale, math.sqrt(var / t) / scale

    def to_dict(self) -> dict:
        out = {
            "version": __version__,
            "config": self.cfg.to_dict(),
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "workers": self.workers,
            "engine": self.engine,
            "notes": self.notes,
            "stats": {},
        }
        for name, acc in self.stats.items():
            entry: dict = {"mean": acc.mean(), "variance": acc.variance()}
            if name == "path_count":
                lm, lv = acc.log_moments()
                entry.update({"log_mean": lm, "log_variance": lv})
                if self.n > 60:
                    entry.pop("mean")
                    entry.pop("variance")
            gamma = scaling_exponent(self.cfg, name)
            if gamma is not None:
                entry["scaling_exponent"] = gamma
                entry["scaled_moments"] = [self.scaled_moment(name, r, gamma)[0] for r in (1, 2, 3)]
            entry["histogram"] = {str(v): c for v, c in sorted(acc.hist.items())}
            out["stats"][name] = entry
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["stat", "value", "count", "frequency"])
        for name, acc in self.stats.items():
            t = acc.trials
            for v, c in sorted(acc.hist.items()):
                w.writerow([name, v, c, c / t])
        return buf.getvalue()


# --- per-trial engine -------------------------------------------------------


class _RowStream:
    def __init__(self, row):
        self.row = row
        self.i = 0

    def random(self) -> float:
        u = self.row[self.i]
        self.i += 1
        return float(u)


def _row_width(cfg: ModelConfig, n: int) -> int:
    return cfg.uniforms_per_step() * (n - 1) + n


def _measure(net: SPNetwork, stat: str, walk: _RowStream) -> int:
    if stat == "source_degree":
        return source_degree(net)
    if stat == "sink_degree":
        return sink_degree(net)
    if stat == "leftmost_length":
        return leftmost_path_length(net)
    if stat == "path_count":
        return count_paths(net)
    if stat == "random_length":
        v, length = SOURCE, 0
        while v != SINK:
            row = net.out[v]
            d = len(row)
            v = net.head[row[min(int(walk.random() * d), d - 1)]]
            length += 1
        return length
    raise ValueError(f"unknown statistic {stat!r}")


def _network_worker(cfg, n, count, stats, seed_seq) -> dict:
    from .network import step

    rng = np.random.Generator(np.random.PCG64(seed_seq))
    width = _row_width(cfg, n)
    growth = cfg.uniforms_per_step() * (n - 1)
    accs = {s: StatAccumulator() for s in stats}
    done = 0
    while done < count:
        block = rng.random((min(CHUNK, count - done), width))
        for row in block:
            stream = _RowStream(row)
            net = SPNetwork()
            for _ in range(n - 1):
                step(net, cfg, stream)
            walk = _RowStream(row[growth:])
            for s in stats:
                accs[s].hist[_measure(net, s, walk)] += 1
        done += len(block)
    return accs


# --- memoised trie engine ---------------------------------------------------


class _StateTrie:
    """Distinct network states reached so far, with lazily created children."""

    def __init__(self, cfg: ModelConfig):
        self.cfg = cfg
        self.nets: list[SPNetwork] = [SPNetwork()]
        self.children: list[dict] = [{}]
        self.cum: list[np.ndarray | None] = [None]
        self.walk_tables: dict[int, tuple] = {}

    def cumulative(self, s: int) -> np.ndarray:
        if self.cum[s] is None:
            w = selection_weights(self.nets[s], self.cfg)
            if w is None:
                w = [1] * self.nets[s].n_edges
            self.cum[s] = np.cumsum(np.asarray(w, dtype=np.float64))
        return self.cum[s]

    def child(self, s: int, j: int, parallel: bool) -> int:
        key = (j, parallel)
        c = self.children[s].get(key)
        if c is None:
            net = self.nets[s].copy()
            net.duplicate(j, parallel)
            c = len(self.nets)
            self.nets.append(net)
            self.children.append({})
            self.cum.append(None)
            self.children[s][key] = c
        return c

    def walk_table(self, s: int):
        tab = self.walk_tables.get(s)
        if tab is None:
            net = self.nets[s]
            nn = net.n_nodes
            width = max(len(row) for row in net.out)
            heads = np.full((nn, width), SINK, dtype=np.int64)
            deg = np.ones(nn, dtype=np.int64)
            for v, row in enumerate(net.out):
                if row:
                    deg[v] = len(row)
                    heads[v, : len(row)] = [net.head[k] for k in row]
            tab = (heads, deg)
            self.walk_tables[s] = tab
        return tab


def _memo_block(trie: _StateTrie, block: np.ndarray, n: int, stats, accs) -> None:
    cfg = trie.cfg
    t = block.shape[0]
    per = cfg.uniforms_per_step()
    state = np.zeros(t, dtype=np.int64)
    for k in range(2, n + 1):
        col = per * (k - 2)
        u_sel = block[:, col]
        new_state = np.empty_like(state)
        order = np.argsort(state, kind="stable")
        uniq, starts = np.unique(state[order], return_index=True)
        bounds = list(starts[1:]) + [t]
        for s, lo, hi in zip(uniq.tolist(), starts.tolist(), bounds):
            idx = order[lo:hi]
            cum = trie.cumulative(s)
            m = len(cum)
            if trie.nets[s].n_edges != k - 1:
                raise AssertionError("trie depth mismatch")
            if cfg.model in (Model.PREFERENTIAL, Model.SATURATION):
                j = np.searchsorted(cum, u_sel[idx] * cum[-1], side="right")
                j = np.minimum(j, m - 1) + 1
            else:
                j = np.minimum((u_sel[idx] * m).astype(np.int64), m - 1) + 1
            if cfg.model.colored:
                par = block[idx, col + 1] < float(cfg.p)
            else:
                net = trie.nets[s]
                sat = np.array([len(net.out[net.tail[e]]) < cfg.b for e in range(1, m + 1)])
                par = sat[j - 1]
            code = (j - 1) * 2 + par.astype(np.int64)
            codes, inverse = np.unique(code, return_inverse=True)
            targets = np.array(
                [trie.child(s, int(c) // 2 + 1, bool(c % 2)) for c in codes], dtype=np.int64
            )
            new_state[idx] = targets[inverse]
        state = new_state
    growth = per * (n - 1)
    uniq, inverse, counts = np.unique(state, return_inverse=True, return_counts=True)
    for s, c in zip(uniq.tolist(), counts.tolist()):
        net = trie.nets[s]
        for name in stats:
            if name == "random_length":
                continue
            accs[name].add_counts(_measure(net, name, None), c)
    if "random_length" in stats:
        # stack the walk tables of all final states and walk every trial at once
        tabs = [trie.walk_table(s) for s in uniq.tolist()]
        nn = max(h.shape[0] for h, _ in tabs)
        width = max(h.shape[1] for h, _ in tabs)
        heads = np.full((len(tabs), nn, width), SINK, dtype=np.int64)
        deg = np.ones((len(tabs), nn), dtype=np.int64)
        for i, (h, d) in enumerate(tabs):
            heads[i, : h.shape[0], : h.shape[1]] = h
            deg[i, : d.shape[0]] = d
        nodes = np.zeros(t, dtype=np.int64)
        length = np.zeros(t, dtype=np.int64)
        for i in range(n):
            active = nodes != SINK
            if not active.any():
                break
            d = deg[inverse, nodes]
            pick = np.minimum((block[:, growth + i] * d).astype(np.int64), d - 1)
            nodes = np.where(active, heads[inverse, nodes, pick], nodes)
            length += active
        accs["random_length"].add_values(length)


def _memo_worker(cfg, n, count, stats, seed_seq) -> dict:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    width = _row_width(cfg, n)
    accs = {s: StatAccumulator() for s in stats}
    trie = _StateTrie(cfg)
    done = 0
    while done < count:
        block = rng.random((min(MEMO_CHUNK, count - done), width))
        _memo_block(trie, block, n, stats, accs)
        done += len(block)
    return accs


# --- Markov-chain projections -----------------------------------------------

CHAIN_STATS = {
    Model.BERNOULLI: {"source_degree", "sink_degree", "leftmost_length", "random_length"},
    Model.BINARY: {"source_degree", "sink_degree", "leftmost_length", "random_length"},
    Model.BARY: {"source_degree", "leftmost_length", "random_length"},
    Model.PREFERENTIAL: {"source_degree"},
    Model.SATURATION: {"source_degree"},
}


def _chain_bernoulli_degree(rng, size, n, p):
    # D grows by one iff a source edge (prob D/(k-1)) is doubled in parallel
    d = np.ones(size, dtype=np.int64)
    for k in range(2, n + 1):
        d += rng.random(size) * (k - 1) < p * d
    return d


def _chain_bary_leftmost(rng, size, n, b):
    """Leftmost path: counts of path nodes by current out-degree 1..b."""
    c = np.zeros((b + 1, size), dtype=np.int64)
    c[1] = 1
    for k in range(2, n + 1):
        x = rng.random(size) * (k - 1)
        lo = np.zeros(size)
        for deg in range(1, b):
            hi = lo + deg * c[deg]
            hit = (x >= lo) & (x < hi)
            c[deg] -= hit
            c[deg + 1] += hit
            lo = hi
        # serial doubling of the leftmost out-edge of a saturated path node
        hit = (x >= lo) & (x < lo + c[b])
        c[1] += hit
    return c[1:].sum(axis=0)


def _chain_binary_sink(rng, size, n):
    """Sink edges split by whether their tail is saturated (b) or not (a)."""
    a = np.ones(size, dtype=np.int64)
    s = np.zeros(size, dtype=np.int64)
    for k in range(2, n + 1):
        x = rng.random(size) * (k - 1)
        par = x < a
        ser = (~par) & (x < a + s)
        a += ser.astype(np.int64) - par
        s += 2 * par - ser
    return a + s


def _chain_preferential_source(rng, size, n, p):
    d = np.ones(size, dtype=np.int64)
    w = np.ones(size, dtype=np.int64)  # sum of (1 + attraction) over source edges
    for k in range(2, n + 1):
        sel = rng.random(size) * (2 * k - 3) < w
        par = sel & (rng.random(size) < p)
        w += sel.astype(np.int64) + par
        d += par
    return d


def _chain_saturation_source(rng, size, n, p):
    c0 = np.ones(size, dtype=np.int64)  # source edges that attracted nothing yet
    c1 = np.zeros(size, dtype=np.int64)  # ... attracted once
    d = np.ones(size, dtype=np.int64)
    for k in range(2, n + 1):
        x = rng.random(size) * k
        par = rng.random(size) < p
        hit0 = x < 2 * c0
        hit1 = (~hit0) & (x < 2 * c0 + c1)
        grow = (hit0 | hit1) & par
        c0 += grow.astype(np.int64) - hit0
        c1 += hit0.astype(np.int64) - hit1
        d += grow
    return d


def _chain_sample(cfg: ModelConfig, stat: str, rng, size: int, n: int) -> np.ndarray:
    m = cfg.model
    if m is Model.BERNOULLI:
        p = float(cfg.p)
        if stat in ("source_degree", "sink_degree"):
            return _chain_bernoulli_degree(rng, size, n, p)
        return _chain_bernoulli_degree(rng, size, n, 1 - p)
    if m in (Model.BINARY, Model.BARY):
        if stat == "source_degree":
            return np.full(size, min(n, cfg.b), dtype=np.int64)
        if stat == "sink_degree":
            return _chain_binary_sink(rng, size, n)
        return _chain_bary_leftmost(rng, size, n, cfg.b)
    if m is Model.PREFERENTIAL:
        return _chain_preferential_source(rng, size, n, float(cfg.p))
    return _chain_saturation_source(rng, size, n, float(cfg.p))


def _chain_worker(cfg, n, count, stats, seed_seq) -> dict:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    accs = {s: StatAccumulator() for s in stats}
    done = 0
    while done < count:
        size = min(CHUNK * 4, count - done)
        for s in stats:
            accs[s].add_values(_chain_sample(cfg, s, rng, size, n))
        done += size
    return accs


ENGINES = {"network": _network_worker, "memo": _memo_worker, "chain": _chain_worker}


def choose_engine(cfg: ModelConfig, n: int, stats) -> str:
    if n <= MEMO_MAX_N:
        return "memo"
    if set(stats) <= CHAIN_STATS[cfg.model]:
        return "chain"
    return "network"


def _run_worker(args):
    engine, cfg, n, count, stats, seed_seq = args
    return ENGINES[engine](cfg, n, count, stats, seed_seq)


def simulate(
    cfg: ModelConfig,
    n: int,
    trials: int,
    seed: int = 0,
    stats=None,
    workers: int = 1,
    engine: str = "auto",
    budget: int = DEFAULT_BUDGET,
    parallel: bool | None = None,
) -> SimSummary:
    """Estimate the distributions of ``stats`` over ``trials`` networks of size n.

    ``workers`` fixes the stream partition (and hence the result);
    ``parallel`` only decides whether the worker shares run in separate
    processes, which never changes the output.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if n < 1:
        raise ValueError("n must be at least 1")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    stats = tuple(stats) if stats else STATS
    for s in stats:
        if s not in STATS:
            raise ValueError(f"unknown statistic {s!r}")
    if trials * n > budget:
        raise ResourceBudgetError(f"trials * n = {trials * n} exceeds the budget {budget}")
    if engine == "auto":
        engine = choose_engine(cfg, n, stats)
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    if engine == "memo" and n > MEMO_MAX_N:
        raise ValueError(f"the memo engine is meant for n <= {MEMO_MAX_N}")
    if engine == "chain":
        missing = set(stats) - CHAIN_STATS[cfg.model]
        if missing:
            raise ValueError(f"no chain projection for {sorted(missing)} under {cfg.model.value}")
    notes = {}
    if engine == "chain":
        if "random_length" in stats:
            notes["random_length"] = "sampled as the leftmost path length (equal in law)"
        if "sink_degree" in stats and cfg.model is Model.BERNOULLI:
            notes["sink_degree"] = "sampled with the source-degree chain (equal in law)"

    seqs = np.random.SeedSequence(seed).spawn(workers)
    shares = [len(range(w, trials, workers)) for w in range(workers)]
    jobs = [(engine, cfg, n, shares[w], stats, seqs[w]) for w in range(workers)]
    if parallel is None:
        parallel = workers > 1 and (os.cpu_count() or 1) > 1
    if parallel:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_worker, jobs))
    else:
        parts = [_run_worker(job) for job in jobs]
    merged = {s: StatAccumulator() for s in stats}
    for part in parts:  # worker order
        merged = {s: merged[s].merge(part[s]) for s in stats}
    return SimSummary(cfg, n, trials, seed, workers, engine, merged, notes)


# --- comparison with limit laws ---------------------------------------------


def _limit_law_moments(cfg: ModelConfig, stat: str, law: str) -> list[float]:
    """E((X/n^gamma)^r) in the limit, r = 0..3, for the scaling used by SimSummary."""
    from . import asymptotics as A

    m = cfg.model
    if law == "mittag-leffler":
        if m is not Model.BERNOULLI:
            raise ValueError("the Mittag-Leffler law describes the Bernoulli model")
        p = float(cfg.p) if stat in ("source_degree", "sink_degree") else 1 - float(cfg.p)
        return [A.mittag_leffler_moment(r, p) for r in range(4)]
    if law == "binary-length":
        if m is not Model.BINARY or stat not in ("leftmost_length", "random_length"):
            raise ValueError("binary-length needs the binary model and a path length")
        return A.binary_length_limit_moments(3).values
    if law == "binary-degree":
        if m is not Model.BINARY or stat != "sink_degree":
            raise ValueError("binary-degree needs the binary model and the sink degree")
        return A.binary_degree_limit_moments(3).values
    if law == "preferential-degree":
        if m is not Model.PREFERENTIAL or stat != "source_degree":
            raise ValueError("preferential-degree needs the preferential model")
        p = float(cfg.p)
        scale = p * 2 ** (p + 1) / (p + 1) ** 2
        vals = A.preferential_limit_moments(3, p).values
        return [scale**r * v for r, v in enumerate(vals)]
    if law == "saturation-degree":
        if m is not Model.SATURATION or stat != "source_degree":
            raise ValueError("saturation-degree needs the saturation model")
        p = float(cfg.p)
        scale = p**2 / (2 * p - 1) ** 2
        vals = A.saturation_limit_moments(3, p).values
        return [scale**r * v for r, v in enumerate(vals)]
    raise ValueError(f"unknown law {law!r}")


DEFAULT_LAW = {
    (Model.BERNOULLI, "source_degree"): "mittag-leffler",
    (Model.BERNOULLI, "sink_degree"): "mittag-leffler",
    (Model.BERNOULLI, "leftmost_length"): "mittag-leffler",
    (Model.BERNOULLI, "random_length"): "mittag-leffler",
    (Model.BINARY, "leftmost_length"): "binary-length",
    (Model.BINARY, "random_length"): "binary-length",
    (Model.BINARY, "sink_degree"): "binary-degree",
    (Model.PREFERENTIAL, "source_degree"): "preferential-degree",
    (Model.SATURATION, "source_degree"): "saturation-degree",
}


def compare_limit(summary: SimSummary, law: str | None = None, stat: str | None = None) -> dict:
    """z-scores of scaled moments r = 1..3 against the limit law.

    For the saturation model with p <= 1/2 the limit is discrete and the
    comparison is made bin by bin against the limit pmf instead.
    """
    cfg = summary.cfg
    if stat is None:
        candidates = [s for s in summary.stats if (cfg.model, s) in DEFAULT_LAW]
        if not candidates:
            raise ValueError("no statistic in the summary has a limit law")
        stat = candidates[0]
    if cfg.model is Model.SATURATION and float(cfg.p) <= 0.5:
        from .exact import saturation_limit_pmf

        if law not in (None, "saturation-pmf"):
            raise ValueError("p <= 1/2 has a discrete limit; use law 'saturation-pmf'")
        acc = summary.stats[stat]
        t = acc.trials
        rows = []
        for m in range(1, 6):
            target = float(saturation_limit_pmf(m, float(cfg.p)))
            emp = acc.hist.get(m, 0) / t
            se = math.sqrt(target * (1 - target) / t)
            rows.append({"m": m, "empirical": emp, "limit": target, "z": (emp - target) / se})
        return {"law": "saturation-pmf", "stat": stat, "bins": rows}
    law = law or DEFAULT_LAW.get((cfg.model, stat))
    if law is None:
        raise ValueError(f"no limit law for {stat} under {cfg.model.value}")
    limit = _limit_law_moments(cfg, stat, law)
    gamma = scaling_exponent(cfg, stat)
    rows = []
    for r in (1, 2, 3):
        est, se = summary.scaled_moment(stat, r, gamma)
        rows.append(
            {
                "r": r,
                "empirical": est,
                "standard_error": se,
                "limit": limit[r],
                "relative_error": (est - limit[r]) / limit[r],
                "z": (est - limit[r]) / se if se > 0 else float("inf"),
            }
        )
    report = {"law": law, "stat": stat, "scaling_exponent": gamma, "moments": rows}
    if law == "mittag-leffler":
        report["density_overlay"] = _density_overlay(summary, stat, gamma)
    return report


def _density_overlay(summary: SimSummary, stat: str, gamma: float, bins: int = 20) -> list[dict]:
    from .asymptotics import mittag_leffler_density

    p = gamma
    acc = summary.stats[stat]
    t = acc.trials
    scale = float(summary.n) ** gamma
    values = np.array(sorted(acc.hist))
    counts = np.array([acc.hist[v] for v in values])
    x = values / scale
    edges = np.linspace(0, np.quantile(np.repeat(x, counts), 0.999), bins + 1)
    hist, _ = np.histogram(x, bins=edges, weights=counts)
    width = edges[1] - edges[0]
    rows = []
    for i in range(bins):
        mid = 0.5 * (edges[i] + edges[i + 1])
        rows.append(
            {
                "x": float(mid),
                "empirical_density": float(hist[i] / (t * width)),
                "limit_density": mittag_leffler_density(float(mid), p),
            }
        )
    return rows
