"""Tree encodings of growth histories.

Doubling edge ``j`` at step ``k`` corresponds to node (or label) ``k``
attaching to ``j``.  The coloured increasing trees remember the duplication
type as the colour of the edge into ``k`` (blue = parallel, red = serial):

* recursive trees          <-> bernoulli model     (uniform attachment)
* plane recursive trees    <-> preferential model  (weight 1 + out-degree)
* binary increasing trees  <-> saturation model    (weight 2 - out-degree)

Bucket recursive trees with capacity ``b`` encode the binary (b = 2) and b-ary
models: a label joins the bucket of its attractor while that bucket has room,
otherwise it opens a child bucket hanging off the attracting label.  A bucket
holds exactly the out-edges of one network node.

All growth functions read uniforms in the order documented in
:mod:`spnet.network`, so ``tree_to_network(grow_*_tree(..., rng))`` and
``grow(cfg, n, rng)`` agree edge for edge when fed the same stream.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate

from ._numeric import as_probability
from .network import Model, ModelConfig, SPNetwork, _as_rng, pick


class Flavor(str, enum.Enum):
    RECURSIVE = "recursive"
    PLANE_RECURSIVE = "plane-recursive"
    BINARY_INCREASING = "binary-increasing"


class Color(str, enum.Enum):
    BLUE = "blue"
    RED = "red"


FLAVOR_OF_MODEL = {
    Model.BERNOULLI: Flavor.RECURSIVE,
    Model.PREFERENTIAL: Flavor.PLANE_RECURSIVE,
    Model.SATURATION: Flavor.BINARY_INCREASING,
}


def _attach_weight(flavor: Flavor, outdeg: int) -> int:
    if flavor is Flavor.RECURSIVE:
        return 1
    if flavor is Flavor.PLANE_RECURSIVE:
        return 1 + outdeg
    return 2 - outdeg


@dataclass
class ColoredIncreasingTree:
    """Increasingly labelled tree with a colour on every edge.

    ``parent[k]`` and ``color[k]`` are defined for ``k = 2..n``; ``children[v]``
    lists the children of ``v`` in attachment order (which is label order).
    """

    flavor: Flavor
    n: int = 1
    parent: dict[int, int] = field(default_factory=dict)
    color: dict[int, Color] = field(default_factory=dict)
    children: dict[int, list[int]] = field(default_factory=lambda: {1: []})

    def attach(self, k: int, j: int, color: Color) -> None:
        if k != self.n + 1:
            raise ValueError(f"next node must be {self.n + 1}, got {k}")
        if not 1 <= j <= self.n:
            raise KeyError(f"unknown node {j}")
        if self.flavor is Flavor.BINARY_INCREASING and len(self.children[j]) >= 2:
            raise ValueError(f"node {j} already has two children")
        self.parent[k] = j
        self.color[k] = Color(color)
        self.children[j].append(k)
        self.children[k] = []
        self.n = k

    def validate(self) -> None:
        for k in range(2, self.n + 1):
            j = self.parent[k]
            if not 1 <= j < k:
                raise ValueError(f"parent of {k} is {j}; labels must increase")
        for v, kids in self.children.items():
            if kids != sorted(kids) or any(self.parent[c] != v for c in kids):
                raise ValueError(f"child list of {v} is inconsistent")
            if self.flavor is Flavor.BINARY_INCREASING and len(kids) > 2:
                raise ValueError(f"node {v} has more than two children")

    def maximal_subtree_order(self, color: Color) -> int:
        """Order of the largest root-containing subtree using only ``color`` edges."""
        size, stack = 0, [1]
        while stack:
            v = stack.pop()
            size += 1
            stack.extend(c for c in self.children[v] if self.color[c] is color)
        return size

    def to_dict(self) -> dict:
        return {
            "flavor": self.flavor.value,
            "n": self.n,
            "nodes": [
                {"label": k, "parent": self.parent[k], "color": self.color[k].value}
                for k in range(2, self.n + 1)
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


@dataclass
class Bucket:
    labels: list[int]
    parent_label: int | None = None


@dataclass
class BucketTree:
    """Bucket recursive tree with bucket capacity ``b``.

    Buckets keep their labels in increasing order.  ``attractor[k]`` records
    which label drew ``k`` in (the history is not recoverable from the bucket
    contents alone once b > 2), and ``child_buckets[j]`` lists the buckets
    hanging off label ``j`` in creation order.
    """

    b: int
    buckets: list[Bucket] = field(default_factory=lambda: [Bucket([1])])
    bucket_of: dict[int, int] = field(default_factory=lambda: {1: 0})
    attractor: dict[int, int] = field(default_factory=dict)
    child_buckets: dict[int, list[int]] = field(default_factory=lambda: {1: []})

    @property
    def n(self) -> int:
        return len(self.bucket_of)

    def insert(self, k: int, j: int) -> bool:
        """Let label ``j`` attract ``k``; return True if ``k`` joined j's bucket."""
        if k != self.n + 1:
            raise ValueError(f"next label must be {self.n + 1}, got {k}")
        if j not in self.bucket_of:
            raise KeyError(f"unknown label {j}")
        home = self.bucket_of[j]
        self.attractor[k] = j
        self.child_buckets[k] = []
        if len(self.buckets[home].labels) < self.b:
            self.buckets[home].labels.append(k)
            self.bucket_of[k] = home
            return True
        self.buckets.append(Bucket([k], parent_label=j))
        self.bucket_of[k] = len(self.buckets) - 1
        self.child_buckets[j].append(len(self.buckets) - 1)
        return False

    @classmethod
    def from_attractors(cls, b: int, attractors: list[int]) -> "BucketTree":
        """Build the tree whose label ``k`` (k = 2, 3, ...) was attracted by ``attractors[k-2]``."""
        tree = cls(b)
        for k, j in enumerate(attractors, start=2):
            tree.insert(k, j)
        return tree

    def validate(self) -> None:
        labels = sorted(self.bucket_of)
        if labels != list(range(1, len(labels) + 1)):
            raise ValueError("labels must be 1..n")
        for idx, bucket in enumerate(self.buckets):
            if not 1 <= len(bucket.labels) <= self.b:
                raise ValueError(f"bucket {idx} holds {len(bucket.labels)} labels")
            if bucket.labels != sorted(bucket.labels):
                raise ValueError(f"bucket {idx} labels are not increasing")
            first = bucket.labels[0]
            if idx == 0:
                if first != 1 or bucket.parent_label is not None:
                    raise ValueError("root bucket must start with label 1")
            elif self.attractor[first] != bucket.parent_label:
                raise ValueError(f"bucket {idx} hangs off the wrong label")
        # replaying the attractor sequence must reproduce the bucket layout
        again = BucketTree.from_attractors(
            self.b, [self.attractor[k] for k in range(2, self.n + 1)]
        )
        if [bk.labels for bk in again.buckets] != [bk.labels for bk in self.buckets]:
            raise ValueError("bucket layout is inconsistent with the growth history")

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "buckets": [
                {"labels": bk.labels[:], "parent_label": bk.parent_label}
                for bk in self.buckets
            ],
            "attractor": {str(k): j for k, j in sorted(self.attractor.items())},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def grow_colored_tree(flavor, p, n: int, rng=None) -> ColoredIncreasingTree:
    flavor = Flavor(flavor)
    p = as_probability(p)
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = _as_rng(rng)
    tree = ColoredIncreasingTree(flavor)
    for k in range(2, n + 1):
        weights = [_attach_weight(flavor, len(tree.children[v])) for v in range(1, k)]
        cum = list(accumulate(weights))
        assert cum[-1] >= 1, "no attachable node"
        if flavor is Flavor.RECURSIVE:
            j = min(int(rng.random() * (k - 1)), k - 2) + 1
        else:
            j = pick(cum, cum[-1], rng.random()) + 1
        color = Color.BLUE if rng.random() < p else Color.RED
        tree.attach(k, j, color)
    return tree


def grow_bucket_tree(b: int, n: int, rng=None) -> BucketTree:
    if b < 2:
        raise ValueError("bucket capacity must be at least 2")
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = _as_rng(rng)
    tree = BucketTree(b)
    for k in range(2, n + 1):
        j = min(int(rng.random() * (k - 1)), k - 2) + 1
        tree.insert(k, j)
    return tree


def tree_to_network(tree: ColoredIncreasingTree | BucketTree) -> SPNetwork:
    """Replay the growth history stored in ``tree`` as a network."""
    tree.validate()
    net = SPNetwork()
    if isinstance(tree, BucketTree):
        for k in range(2, tree.n + 1):
            j = tree.attractor[k]
            net.duplicate(j, tree.bucket_of[k] == tree.bucket_of[j])
    else:
        for k in range(2, tree.n + 1):
            net.duplicate(tree.parent[k], tree.color[k] is Color.BLUE)
    return net


def history_probability(tree: ColoredIncreasingTree | BucketTree, cfg: ModelConfig) -> Fraction:
    """Exact probability that the model produces this particular history."""
    if isinstance(tree, BucketTree):
        if cfg.model not in (Model.BINARY, Model.BARY) or cfg.b != tree.b:
            raise ValueError("bucket trees encode the binary/b-ary model with matching b")
        prob = Fraction(1)
        for k in range(2, tree.n + 1):
            prob /= k - 1
        return prob
    if FLAVOR_OF_MODEL.get(cfg.model) is not tree.flavor:
        raise ValueError(f"{tree.flavor.value} trees do not encode the {cfg.model.value} model")
    if not isinstance(cfg.p, Fraction):
        raise TypeError("history probabilities need a rational p")
    p, q = cfg.p, 1 - cfg.p
    outdeg = {v: 0 for v in range(1, tree.n + 1)}
    prob = Fraction(1)
    for k in range(2, tree.n + 1):
        j = tree.parent[k]
        total = sum(_attach_weight(tree.flavor, outdeg[v]) for v in range(1, k))
        prob *= Fraction(_attach_weight(tree.flavor, outdeg[j]), total)
        prob *= p if tree.color[k] is Color.BLUE else q
        outdeg[j] += 1
    return prob
