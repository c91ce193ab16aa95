from fractions import Fraction

import pytest

from spnet import oracle as O
from spnet.network import Model, ModelConfig

H = Fraction(1, 2)
CONFIGS = [
    ModelConfig(Model.BERNOULLI, p=Fraction(1, 4)),
    ModelConfig(Model.BINARY),
    ModelConfig(Model.BARY, b=3),
    ModelConfig(Model.PREFERENTIAL, p=Fraction(1, 3)),
    ModelConfig(Model.SATURATION, p=Fraction(3, 4)),
]


def test_bernoulli_n2():
    rep = O.enumerate(ModelConfig(Model.BERNOULLI, p=Fraction(1, 3)), 2)
    assert rep.pmf("source_degree") == {1: Fraction(2, 3), 2: Fraction(1, 3)}
    assert rep.history_count == 2


def test_bernoulli_n3():
    rep = O.enumerate(ModelConfig(Model.BERNOULLI, p=H), 3)
    assert rep.pmf("source_degree") == {1: Fraction(3, 8), 2: Fraction(3, 8), 3: Fraction(1, 4)}
    assert rep.expectation("source_degree") == Fraction(15, 8)


def test_bernoulli_n2_paths():
    rep = O.enumerate(ModelConfig(Model.BERNOULLI, p=H), 2)
    assert rep.expectation("path_count") == Fraction(3, 2)


def test_binary_n3_forced():
    rep = O.enumerate(ModelConfig(Model.BINARY), 3)
    assert rep.pmf("path_count") == {2: 1}


@pytest.mark.parametrize("cfg", CONFIGS, ids=lambda c: c.model.value)
def test_probability_conservation(cfg):
    for n in range(1, 6):
        rep = O.enumerate(cfg, n)
        assert rep.total_probability == 1
        for stat in O.STAT_NAMES:
            assert sum(rep.pmf(stat).values()) == 1


@pytest.mark.parametrize("cfg", CONFIGS, ids=lambda c: c.model.value)
def test_tree_encoding_gives_same_tables(cfg):
    n = 5
    a = O.enumerate(cfg, n)
    b = O.enumerate_via_trees(cfg, n)
    for stat in O.STAT_NAMES:
        assert a.pmf(stat) == b.pmf(stat)
    assert dict(a.joint) == dict(b.joint)


def test_bucket_history_count():
    rep = O.enumerate(ModelConfig(Model.BINARY), 6)
    assert rep.history_count == 120


@pytest.mark.parametrize("p", [Fraction(1, 4), H, Fraction(2, 3)])
def test_bernoulli_formulas(p):
    cfg = ModelConfig(Model.BERNOULLI, p=p)
    for n in range(1, 7):
        failed = [c.name for c in O.verify_formulas(cfg, n) if not c.passed]
        assert not failed, (n, failed)


@pytest.mark.parametrize("cfg", CONFIGS[1:], ids=lambda c: c.model.value)
def test_other_model_formulas(cfg):
    for n in range(1, 7):
        checks = O.verify_formulas(cfg, n)
        assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_budget_and_rational_p():
    with pytest.raises(O.OracleBudgetError):
        O.enumerate(ModelConfig(Model.BERNOULLI, p=H), 9)
    with pytest.raises(O.OracleBudgetError):
        O.enumerate(ModelConfig(Model.BINARY), 10)
    with pytest.raises(TypeError):
        O.enumerate(ModelConfig(Model.BERNOULLI, p=0.5), 3)


def test_report_json():
    rep = O.enumerate(ModelConfig(Model.BERNOULLI, p=H), 3)
    d = rep.to_dict()
    assert d["pmfs"]["source_degree"]["1"] == "3/8"
    assert d["total_probability"] == "1/1"
