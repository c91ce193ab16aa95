import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spnet.network import Model, ModelConfig, grow, leftmost_path_length, source_degree
from spnet.trees import (
    FLAVOR_OF_MODEL,
    BucketTree,
    Color,
    ColoredIncreasingTree,
    Flavor,
    grow_bucket_tree,
    grow_colored_tree,
    history_probability,
    tree_to_network,
)

COLORED = [
    ModelConfig(Model.BERNOULLI, p=Fraction(1, 3)),
    ModelConfig(Model.PREFERENTIAL, p=Fraction(1, 2)),
    ModelConfig(Model.SATURATION, p=Fraction(3, 4)),
]


def test_fig2_bucket_layout(fig2_tree):
    fig2_tree.validate()
    assert [bk.labels for bk in fig2_tree.buckets] == [[1, 2], [3], [4, 5], [6], [7]]
    assert fig2_tree.n == 7


def test_plane_recursive_attachment_weight():
    # node 2 hangs off node 1, so node 1 has weight 2 and node 2 weight 1
    cfg = ModelConfig(Model.PREFERENTIAL, p=Fraction(1, 2))
    tree = ColoredIncreasingTree(Flavor.PLANE_RECURSIVE)
    tree.attach(2, 1, Color.BLUE)
    tree.attach(3, 1, Color.BLUE)
    assert history_probability(tree, cfg) == Fraction(1, 2) * Fraction(2, 3) * Fraction(1, 2)
    assert history_probability(tree, cfg) == Fraction(1, 6)


def test_bucket_histories_equally_likely():
    cfg = ModelConfig(Model.BINARY)
    tree = BucketTree.from_attractors(2, [1, 1, 2, 3])
    assert history_probability(tree, cfg) == Fraction(1, math.factorial(4))


def test_binary_increasing_caps_children():
    tree = ColoredIncreasingTree(Flavor.BINARY_INCREASING)
    tree.attach(2, 1, Color.RED)
    tree.attach(3, 1, Color.BLUE)
    with pytest.raises(ValueError):
        tree.attach(4, 1, Color.RED)


def test_labels_must_increase():
    tree = ColoredIncreasingTree(Flavor.RECURSIVE)
    with pytest.raises(ValueError):
        tree.attach(3, 1, Color.RED)
    bucket = BucketTree(2)
    with pytest.raises(KeyError):
        bucket.insert(2, 5)


def test_mismatched_model_rejected():
    tree = ColoredIncreasingTree(Flavor.RECURSIVE)
    with pytest.raises(ValueError):
        history_probability(tree, ModelConfig(Model.PREFERENTIAL, p=Fraction(1, 2)))
    with pytest.raises(ValueError):
        history_probability(BucketTree(3), ModelConfig(Model.BINARY))


@settings(max_examples=50, deadline=None)
@given(idx=st.integers(0, 2), n=st.integers(1, 30), seed=st.integers(0, 2**32 - 1))
def test_colored_tree_replays_network(idx, n, seed):
    cfg = COLORED[idx]
    flavor = FLAVOR_OF_MODEL[cfg.model]
    tree = grow_colored_tree(flavor, cfg.p, n, np.random.default_rng(seed))
    tree.validate()
    net = tree_to_network(tree)
    assert net == grow(cfg, n, np.random.default_rng(seed))
    # blue subtree order = source degree, red subtree order = leftmost length
    assert tree.maximal_subtree_order(Color.BLUE) == source_degree(net)
    assert tree.maximal_subtree_order(Color.RED) == leftmost_path_length(net)
    assert 0 < history_probability(tree, cfg) <= 1


@settings(max_examples=50, deadline=None)
@given(b=st.integers(2, 5), n=st.integers(1, 30), seed=st.integers(0, 2**32 - 1))
def test_bucket_tree_replays_network(b, n, seed):
    cfg = ModelConfig(Model.BINARY) if b == 2 else ModelConfig(Model.BARY, b=b)
    tree = grow_bucket_tree(b, n, np.random.default_rng(seed))
    tree.validate()
    assert all(len(bk.labels) <= b for bk in tree.buckets)
    assert tree_to_network(tree) == grow(cfg, n, np.random.default_rng(seed))
