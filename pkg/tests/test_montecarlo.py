import math
from fractions import Fraction

import numpy as np
import pytest

from spnet import exact as E
from spnet import montecarlo as M
from spnet import oracle as O
from spnet.network import Model, ModelConfig

H = Fraction(1, 2)
BERN = ModelConfig(Model.BERNOULLI, p=H)
BINARY = ModelConfig(Model.BINARY)


def test_binary_n2_always_two_paths():
    s = M.simulate(BINARY, 2, 500, seed=1, stats=["path_count"])
    assert s.pmf("path_count") == {2: 1.0}


def test_histogram_mass_and_variance():
    s = M.simulate(BERN, 20, 3000, seed=2)
    for name, acc in s.stats.items():
        assert acc.trials == 3000
        assert acc.variance() >= 0


def test_deterministic_for_seed_and_workers():
    a = M.simulate(BERN, 30, 4000, seed=5, workers=3, engine="network")
    b = M.simulate(BERN, 30, 4000, seed=5, workers=3, engine="network")
    assert a.to_dict() == b.to_dict()
    c = M.simulate(BERN, 30, 4000, seed=6, workers=3, engine="network")
    assert a.to_dict() != c.to_dict()


def test_process_pool_does_not_change_result():
    a = M.simulate(BINARY, 15, 2000, seed=9, workers=2, engine="network", parallel=False)
    b = M.simulate(BINARY, 15, 2000, seed=9, workers=2, engine="network", parallel=True)
    assert a.to_dict() == b.to_dict()


@pytest.mark.parametrize(
    "cfg",
    [
        BERN,
        BINARY,
        ModelConfig(Model.BARY, b=3),
        ModelConfig(Model.PREFERENTIAL, p=Fraction(1, 3)),
        ModelConfig(Model.SATURATION, p=Fraction(3, 4)),
    ],
    ids=lambda c: c.model.value,
)
def test_memo_engine_identical_to_network(cfg):
    a = M.simulate(cfg, 7, 3000, seed=4, workers=2, engine="network")
    b = M.simulate(cfg, 7, 3000, seed=4, workers=2, engine="memo")
    for s in M.STATS:
        assert a.stats[s].hist == b.stats[s].hist


def test_merge_is_order_fixed_and_associative():
    x, y, z = (M.StatAccumulator() for _ in range(3))
    x.add_values([1, 2, 2])
    y.add_values(np.array([3, 1]))
    z.add_counts(5, 4)
    assert x.merge(y).merge(z).hist == x.merge(y.merge(z)).hist


def test_bernoulli_mean_degree_within_5_sigma():
    n, t = 500, 100_000
    s = M.simulate(BERN, n, t, seed=12, stats=["source_degree"])
    want = float(E.bernoulli_degree_factorial_moment(n, 1, H))
    sigma = math.sqrt(s.variance("source_degree") / t)
    assert abs(s.mean("source_degree") - want) < 5 * sigma


@pytest.mark.parametrize(
    "cfg,stat",
    [
        (ModelConfig(Model.BERNOULLI, p=Fraction(1, 3)), "leftmost_length"),
        (BINARY, "sink_degree"),
        (BINARY, "leftmost_length"),
        (ModelConfig(Model.BARY, b=3), "leftmost_length"),
        (ModelConfig(Model.PREFERENTIAL, p=Fraction(1, 3)), "source_degree"),
        (ModelConfig(Model.SATURATION, p=Fraction(3, 4)), "source_degree"),
    ],
    ids=lambda v: getattr(getattr(v, "model", None), "value", v),
)
def test_chain_matches_network_in_law(cfg, stat):
    n, t = 40, 20000
    a = M.simulate(cfg, n, t, seed=21, stats=[stat], engine="chain")
    b = M.simulate(cfg, n, t, seed=22, stats=[stat], engine="network")
    se = math.sqrt((a.variance(stat) + b.variance(stat)) / t)
    assert abs(a.mean(stat) - b.mean(stat)) < 5 * se


def test_chain_random_length_note():
    s = M.simulate(BERN, 30, 100, seed=1, stats=["random_length"], engine="chain")
    assert "random_length" in s.notes


def test_small_n_against_oracle():
    cfg = ModelConfig(Model.PREFERENTIAL, p=Fraction(1, 3))
    t = 200_000
    s = M.simulate(cfg, 5, t, seed=3)
    rep = O.enumerate(cfg, 5)
    for stat in O.STAT_NAMES:
        emp = s.pmf(stat)
        for v, pr in rep.pmf(stat).items():
            pf = float(pr)
            assert abs(emp.get(v, 0.0) - pf) <= 4.5 * math.sqrt(pf * (1 - pf) / t) + 1e-12


def test_compare_limit_bernoulli():
    s = M.simulate(BERN, 10_000, 20_000, seed=8, stats=["source_degree"])
    rep = M.compare_limit(s)
    assert rep["law"] == "mittag-leffler"
    first = rep["moments"][0]
    assert first["limit"] == pytest.approx(2 / math.sqrt(math.pi))
    assert abs(first["relative_error"]) < 0.05
    assert rep["density_overlay"]


def test_compare_limit_saturation_discrete():
    cfg = ModelConfig(Model.SATURATION, p=Fraction(1, 4))
    t = 20_000
    s = M.simulate(cfg, 10_000, t, seed=4, stats=["source_degree"])
    rep = M.compare_limit(s)
    row = rep["bins"][0]
    assert row["limit"] == pytest.approx(9 / 16)
    assert abs(row["z"]) < 4


def test_compare_limit_rejects_wrong_law():
    s = M.simulate(BINARY, 50, 200, seed=1, stats=["sink_degree"])
    with pytest.raises(ValueError):
        M.compare_limit(s, "mittag-leffler")


def test_budget_and_argument_errors():
    with pytest.raises(M.ResourceBudgetError):
        M.simulate(BERN, 1000, 1000, budget=10**5)
    with pytest.raises(ValueError):
        M.simulate(BERN, 10, 0)
    with pytest.raises(ValueError):
        M.simulate(ModelConfig(Model.PREFERENTIAL, p=H), 30, 10, stats=["path_count"], engine="chain")
    with pytest.raises(ValueError):
        M.simulate(BERN, 10, 10, stats=["diameter"])


def test_large_n_path_count_reported_on_log_scale():
    s = M.simulate(BINARY, 80, 200, seed=1, stats=["path_count"], engine="network")
    entry = s.to_dict()["stats"]["path_count"]
    assert "log_mean" in entry and "mean" not in entry


def test_csv_layout():
    s = M.simulate(BINARY, 5, 100, seed=1, stats=["sink_degree"])
    lines = s.to_csv().splitlines()
    assert lines[0] == "stat,value,count,frequency"
    assert sum(int(l.split(",")[2]) for l in lines[1:]) == 100
