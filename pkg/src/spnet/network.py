"""Series-parallel networks grown by edge duplication.

A network starts as a single edge ``1`` from the source to the sink.  Step
``k`` picks one of the ``k - 1`` existing edges and doubles it, either in
parallel (a new edge ``k`` with the same endpoints, placed immediately to the
right of the chosen edge) or serially (the chosen edge ``j = (x, y)`` becomes
``(x, z)`` and the new edge ``k = (z, y)`` hangs off a fresh node ``z``).

The five growth models differ only in how the edge is picked and how the
duplication type is decided; see :func:`grow`.

Random streams
--------------
Growth consumes uniforms from any object with a ``random()`` method
(``numpy.random.Generator`` or ``random.Random``).  Each step draws exactly
one uniform for the edge selection and then, for the Bernoulli-type models
(bernoulli, preferential, saturation), one more for the colour: the step is
parallel iff that second uniform is ``< p``.  Binary and b-ary steps draw only
the selection uniform.  The tree encodings in :mod:`spnet.trees` consume the
same stream in the same order, so a history can be replayed exactly.
"""

from __future__ import annotations

import bisect
import enum
import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Iterable, Protocol

from ._numeric import as_probability

SOURCE = 0
SINK = 1


class UniformSource(Protocol):
    def random(self) -> float: ...


class Model(str, enum.Enum):
    BERNOULLI = "bernoulli"
    BINARY = "binary"
    PREFERENTIAL = "preferential"
    SATURATION = "saturation"
    BARY = "bary"

    @property
    def colored(self) -> bool:
        """True for the models whose duplication type is a Bernoulli(p) coin."""
        return self in (Model.BERNOULLI, Model.PREFERENTIAL, Model.SATURATION)


@dataclass(frozen=True)
class ModelConfig:
    """Growth model plus its parameters.

    ``p`` is kept as a Fraction when given exactly (``Fraction``, ``int`` or an
    ``"a/b"`` string) and as a float otherwise.  ``b`` is the out-degree cap of
    the saturation rules; the binary model is the b-ary model with ``b = 2``.
    """

    model: Model
    p: Fraction | float | None = None
    b: int | None = None

    def __post_init__(self):
        model = Model(self.model)
        object.__setattr__(self, "model", model)
        if model.colored:
            if self.p is None:
                raise ValueError(f"model {model.value!r} needs a probability p")
            object.__setattr__(self, "p", as_probability(self.p))
            if self.b is not None:
                raise ValueError(f"model {model.value!r} takes no b")
        else:
            if self.p is not None:
                raise ValueError(f"model {model.value!r} takes no p")
            if model is Model.BINARY:
                if self.b not in (None, 2):
                    raise ValueError("the binary model has b = 2")
                object.__setattr__(self, "b", 2)
            else:
                if self.b is None or int(self.b) != self.b or self.b < 2:
                    raise ValueError(f"b-ary model needs an integer b >= 2, got {self.b}")
                object.__setattr__(self, "b", int(self.b))

    @property
    def rational(self) -> bool:
        return isinstance(self.p, Fraction)

    def uniforms_per_step(self) -> int:
        return 2 if self.model.colored else 1

    def to_dict(self) -> dict:
        out: dict = {"model": self.model.value}
        if self.p is not None:
            out["p"] = (
                f"{self.p.numerator}/{self.p.denominator}"
                if isinstance(self.p, Fraction)
                else self.p
            )
        if self.b is not None:
            out["b"] = self.b
        return out


class SPNetwork:
    """Labelled two-terminal DAG with ordered out-adjacency.

    Nodes are integers: ``0`` is the source, ``1`` the sink, and every serial
    doubling creates the next integer.  Edge labels run ``1..n``; index ``0``
    of the per-edge lists is a placeholder so labels index directly.
    """

    __slots__ = ("tail", "head", "out", "attraction")

    def __init__(self):
        self.tail = [-1, SOURCE]
        self.head = [-1, SINK]
        self.out: list[list[int]] = [[1], []]
        self.attraction = [0, 0]

    source = property(lambda self: SOURCE)
    sink = property(lambda self: SINK)

    @property
    def n_edges(self) -> int:
        return len(self.tail) - 1

    @property
    def n_nodes(self) -> int:
        return len(self.out)

    @property
    def nodes(self) -> range:
        return range(len(self.out))

    @property
    def edges(self) -> dict[int, tuple[int, int]]:
        return {k: (self.tail[k], self.head[k]) for k in range(1, len(self.tail))}

    def copy(self) -> "SPNetwork":
        net = SPNetwork.__new__(SPNetwork)
        net.tail = self.tail[:]
        net.head = self.head[:]
        net.out = [row[:] for row in self.out]
        net.attraction = self.attraction[:]
        return net

    def __eq__(self, other):
        if not isinstance(other, SPNetwork):
            return NotImplemented
        return (
            self.tail == other.tail
            and self.head == other.head
            and self.out == other.out
            and self.attraction == other.attraction
        )

    def __repr__(self):
        return f"SPNetwork(n_edges={self.n_edges}, n_nodes={self.n_nodes})"

    def _check_step(self, j: int, new_label: int | None) -> int:
        n = self.n_edges
        if not 1 <= j <= n:
            raise KeyError(f"unknown edge label {j}")
        if new_label is None:
            return n + 1
        if new_label != n + 1:
            raise ValueError(f"new label must be {n + 1}, got {new_label}")
        return new_label

    def duplicate_parallel(self, j: int, new_label: int | None = None) -> "SPNetwork":
        k = self._check_step(j, new_label)
        x = self.tail[j]
        row = self.out[x]
        row.insert(row.index(j) + 1, k)
        self.tail.append(x)
        self.head.append(self.head[j])
        self.attraction[j] += 1
        self.attraction.append(0)
        return self

    def duplicate_serial(self, j: int, new_label: int | None = None) -> "SPNetwork":
        k = self._check_step(j, new_label)
        z = len(self.out)
        self.out.append([k])
        self.tail.append(z)
        self.head.append(self.head[j])
        self.head[j] = z
        self.attraction[j] += 1
        self.attraction.append(0)
        return self

    def duplicate(self, j: int, parallel: bool) -> "SPNetwork":
        return self.duplicate_parallel(j) if parallel else self.duplicate_serial(j)

    def topological_order(self) -> list[int]:
        indeg = [0] * len(self.out)
        for k in range(1, len(self.head)):
            indeg[self.head[k]] += 1
        order = []
        queue = deque(v for v in self.nodes if indeg[v] == 0)
        while queue:
            v = queue.popleft()
            order.append(v)
            for k in self.out[v]:
                h = self.head[k]
                indeg[h] -= 1
                if indeg[h] == 0:
                    queue.append(h)
        if len(order) != len(self.out):
            raise ValueError("network has a cycle")
        return order

    def validate(self) -> None:
        """Raise ``ValueError`` if any structural invariant is broken."""
        n = self.n_edges
        if not (len(self.head) == len(self.attraction) == n + 1):
            raise ValueError("per-edge arrays disagree in length")
        seen = sorted(k for row in self.out for k in row)
        if seen != list(range(1, n + 1)):
            raise ValueError("out-adjacency does not partition the edge labels")
        for v, row in enumerate(self.out):
            for k in row:
                if self.tail[k] != v:
                    raise ValueError(f"edge {k} listed under node {v} but has tail {self.tail[k]}")
        order = self.topological_order()
        indeg = [0] * len(self.out)
        for k in range(1, n + 1):
            indeg[self.head[k]] += 1
        sources = [v for v in self.nodes if indeg[v] == 0]
        sinks = [v for v in self.nodes if not self.out[v]]
        if sources != [SOURCE] or sinks != [SINK]:
            raise ValueError(f"expected unique poles, got sources={sources} sinks={sinks}")
        reach = [False] * len(self.out)
        reach[SOURCE] = True
        for v in order:
            if reach[v]:
                for k in self.out[v]:
                    reach[self.head[k]] = True
        coreach = [False] * len(self.out)
        coreach[SINK] = True
        for v in reversed(order):
            if any(coreach[self.head[k]] for k in self.out[v]):
                coreach[v] = True
        for k in range(1, n + 1):
            if not (reach[self.tail[k]] and coreach[self.head[k]]):
                raise ValueError(f"edge {k} lies on no source-to-sink path")

    def to_dict(self) -> dict:
        return {
            "source": SOURCE,
            "sink": SINK,
            "edges": [
                {"label": k, "tail": self.tail[k], "head": self.head[k]}
                for k in range(1, len(self.tail))
            ],
            "order": {str(v): row[:] for v, row in enumerate(self.out) if row},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "SPNetwork":
        if data["source"] != SOURCE or data["sink"] != SINK:
            raise ValueError("poles must be 0 (source) and 1 (sink)")
        edges = sorted(data["edges"], key=lambda e: e["label"])
        if [e["label"] for e in edges] != list(range(1, len(edges) + 1)):
            raise ValueError("edge labels must be 1..n")
        n_nodes = 1 + max([SINK] + [max(e["tail"], e["head"]) for e in edges])
        net = cls.__new__(cls)
        net.tail = [-1] + [e["tail"] for e in edges]
        net.head = [-1] + [e["head"] for e in edges]
        net.out = [[] for _ in range(n_nodes)]
        for v, row in data["order"].items():
            net.out[int(v)] = list(row)
        # attraction counts are not part of the dump
        net.attraction = [0] * (len(edges) + 1)
        net.validate()
        return net


def new_network() -> SPNetwork:
    return SPNetwork()


def duplicate_parallel(net: SPNetwork, j: int, new_label: int) -> SPNetwork:
    return net.duplicate_parallel(j, new_label)


def duplicate_serial(net: SPNetwork, j: int, new_label: int) -> SPNetwork:
    return net.duplicate_serial(j, new_label)


# --- growth -----------------------------------------------------------------


def pick(cumulative: list[int], total: int, u: float) -> int:
    """Index of the slot hit by ``u * total`` on cumulative integer weights."""
    i = bisect.bisect_right(cumulative, u * total)
    # u * total can round up to total when u is within an ulp of 1
    return min(i, len(cumulative) - 1)


def selection_weights(net: SPNetwork, cfg: ModelConfig) -> list[int] | None:
    """Per-edge selection weights (labels 1..n), or None for uniform selection."""
    if cfg.model is Model.PREFERENTIAL:
        return [1 + a for a in net.attraction[1:]]
    if cfg.model is Model.SATURATION:
        return [2 - a for a in net.attraction[1:]]
    return None


def select_edge(net: SPNetwork, cfg: ModelConfig, u: float) -> int:
    m = net.n_edges
    weights = selection_weights(net, cfg)
    if weights is None:
        return min(int(u * m), m - 1) + 1
    cum = list(accumulate(weights))
    return pick(cum, cum[-1], u) + 1


def step(net: SPNetwork, cfg: ModelConfig, rng: UniformSource) -> tuple[int, bool]:
    """Apply one growth step in place; return (selected edge, parallel?)."""
    j = select_edge(net, cfg, rng.random())
    if cfg.model.colored:
        parallel = rng.random() < cfg.p
    else:
        parallel = len(net.out[net.tail[j]]) < cfg.b
    net.duplicate(j, parallel)
    return j, parallel


def _as_rng(rng) -> UniformSource:
    if rng is None or isinstance(rng, int):
        import numpy as np

        return np.random.default_rng(rng)
    return rng


def grow(cfg: ModelConfig, n: int, rng=None) -> SPNetwork:
    """Grow a network with ``n`` edges under ``cfg``.

    Selection: bernoulli, binary and bary pick an edge uniformly; preferential
    picks edge j with weight 1 + attraction(j) (total 2k - 3 at step k);
    saturation with weight 2 - attraction(j) (total k), so an edge that has
    attracted twice is never picked again.  Duplication type: a Bernoulli(p)
    coin for the coloured models, otherwise parallel iff the tail of the picked
    edge has out-degree below ``b``.
    """
    if not isinstance(cfg, ModelConfig):
        raise TypeError("cfg must be a ModelConfig")
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = _as_rng(rng)
    net = SPNetwork()
    for _ in range(2, n + 1):
        step(net, cfg, rng)
    return net


def replay(cfg: ModelConfig, uniforms: Iterable[float], n: int) -> SPNetwork:
    """Grow from an explicit uniform sequence (see module docstring for order)."""
    it = iter(uniforms)

    class _Seq:
        def random(self_inner):
            return next(it)

    return grow(cfg, n, _Seq())


# --- statistics -------------------------------------------------------------


def source_degree(net: SPNetwork) -> int:
    return len(net.out[SOURCE])


def sink_degree(net: SPNetwork) -> int:
    return net.head.count(SINK)


def leftmost_path_length(net: SPNetwork) -> int:
    v, length = SOURCE, 0
    while v != SINK:
        v = net.head[net.out[v][0]]
        length += 1
    return length


def random_path_length(net: SPNetwork, rng=None) -> int:
    """Walk from the source taking a uniform out-edge at every node."""
    rng = _as_rng(rng)
    v, length = SOURCE, 0
    while v != SINK:
        row = net.out[v]
        d = len(row)
        v = net.head[row[min(int(rng.random() * d), d - 1)]]
        length += 1
    return length


def random_path_length_pmf(net: SPNetwork) -> dict[int, Fraction]:
    """Exact distribution of :func:`random_path_length` (rational weights)."""
    dist: dict[int, dict[int, Fraction]] = {SINK: {0: Fraction(1)}}
    for v in reversed(net.topological_order()):
        row = net.out[v]
        if not row:
            continue
        w = Fraction(1, len(row))
        acc: dict[int, Fraction] = {}
        for k in row:
            for length, prob in dist[net.head[k]].items():
                acc[length + 1] = acc.get(length + 1, 0) + w * prob
        dist[v] = acc
    return dict(sorted(dist[SOURCE].items()))


def count_paths(net: SPNetwork) -> int:
    paths = [0] * net.n_nodes
    paths[SINK] = 1
    for v in reversed(net.topological_order()):
        if net.out[v]:
            paths[v] = sum(paths[net.head[k]] for k in net.out[v])
    return paths[SOURCE]


def enumerate_paths(net: SPNetwork) -> list[tuple[int, ...]]:
    """All source-to-sink paths as label sequences (brute force, small nets only)."""
    found = []
    stack = [(SOURCE, ())]
    while stack:
        v, labels = stack.pop()
        if v == SINK:
            found.append(labels)
            continue
        for k in net.out[v]:
            stack.append((net.head[k], labels + (k,)))
    return found


STATISTICS = {
    "source-degree": source_degree,
    "sink-degree": sink_degree,
    "leftmost-length": leftmost_path_length,
    "path-count": count_paths,
}
