import math
from fractions import Fraction

import pytest

from spnet import exact as E
from spnet._numeric import gbinom, harmonic

H = Fraction(1, 2)


def test_degree_pmf_small_n():
    assert E.bernoulli_degree_pmf(2, H).entries == {1: H, 2: H}
    assert E.bernoulli_degree_pmf(3, H).entries == {1: Fraction(3, 8), 2: Fraction(3, 8), 3: Fraction(1, 4)}


@pytest.mark.parametrize("p", [Fraction(1, 4), Fraction(2, 3), Fraction(1, 7)])
def test_degree_pmf_n2_one_step(p):
    assert E.bernoulli_degree_pmf(2, p).entries == {1: 1 - p, 2: p}


@pytest.mark.parametrize("p", [Fraction(1, 4), H, Fraction(2, 3)])
def test_degree_pmf_formula_equals_dp(p):
    for n in range(1, 41):
        a = E.bernoulli_degree_pmf(n, p)
        assert a.entries == E.bernoulli_degree_pmf_dp(n, p).entries
        assert a.total() == 1


def test_degree_pmf_float_mode():
    t = E.bernoulli_degree_pmf(30, 0.3)
    assert t.numeric_mode == "float"
    exact = E.bernoulli_degree_pmf(30, Fraction(3, 10))
    for m, v in exact.entries.items():
        assert t.entries[m] == pytest.approx(float(v), rel=1e-12)


def test_closed_paths_float_mode():
    p = Fraction(3, 10)
    for n in (10, 40):
        want = float(E.bernoulli_expected_paths(n, p))
        assert E.bernoulli_expected_paths_closed(n, 0.3) == pytest.approx(want, rel=1e-12)


def test_leftpath_pmf_is_swap():
    assert E.bernoulli_leftpath_pmf(2, H).entries == {1: H, 2: H}
    assert E.bernoulli_leftpath_pmf(3, Fraction(1, 4)).entries == E.bernoulli_degree_pmf(3, Fraction(3, 4)).entries


def test_joint_pmf_marginal():
    joint = E.bernoulli_joint_pmf(3, H)
    assert joint.total() == 1
    assert joint.marginal(0) == {1: Fraction(3, 8), 2: Fraction(3, 8), 3: Fraction(1, 4)}


def test_factorial_moments():
    assert E.bernoulli_degree_factorial_moment(3, 1, H) == Fraction(15, 8)
    p = Fraction(2, 5)
    for n in (1, 5, 12):
        assert E.bernoulli_degree_factorial_moment(n, 1, p) == gbinom(n + p - 1, n - 1)
        pmf = E.bernoulli_degree_pmf(n, p).entries
        for r in (2, 3):
            want = sum(Fraction(math.perm(m, r)) * v for m, v in pmf.items())
            assert E.bernoulli_degree_factorial_moment(n, r, p) == want


def test_expected_paths():
    assert E.bernoulli_expected_paths(1, H) == 1
    assert E.bernoulli_expected_paths(2, H) == Fraction(3, 2)
    for p in (Fraction(1, 4), H, Fraction(2, 3)):
        for n in range(1, 16):
            assert E.bernoulli_expected_paths(n, p) == E.bernoulli_expected_paths_closed(n, p)


def test_expected_paths_growth_rate():
    from spnet.asymptotics import bernoulli_paths_constant

    n = 400
    ep = float(E.bernoulli_expected_paths(n, 0.5))
    assert ep ** (1 / n) == pytest.approx(bernoulli_paths_constant(H), rel=2e-2)


def test_complete_bell():
    assert E.complete_bell(3, [1, 1, 1]) == 5
    assert [E.complete_bell(k, [1] * 6) for k in range(6)] == [1, 1, 2, 5, 15, 52]


def test_binary_small_values():
    assert E.binary_expected_pathlength(1) == pytest.approx(1)
    assert E.binary_expected_pathlength(2) == pytest.approx(1)
    assert E.binary_expected_sinkdegree(2) == pytest.approx(2)
    ep = E.binary_expected_paths_exact(7)
    assert ep[:3] == [1, 2, 2]


def test_binary_paths_scaled_matches_exact():
    exact = E.binary_expected_paths_exact(300)
    mant, log_scale = E.binary_expected_paths(300)
    assert math.log(mant) + log_scale == pytest.approx(math.log(float(exact[-1])), rel=1e-12)


def test_binary_degree_asymptotic_ratio():
    s2 = math.sqrt(2)
    n = 10**5
    lead = (1 + s2) / 2 * n ** (s2 - 1) / math.gamma(s2)
    assert E.binary_expected_sinkdegree(n) / lead == pytest.approx(1, abs=1e-3)


def test_preferential_sourcedegree():
    assert E.preferential_expected_sourcedegree(2, H) == Fraction(3, 2)
    assert E.preferential_expected_sourcedegree(1, Fraction(1, 3)) == 1


def test_saturation_sourcedegree():
    assert E.saturation_expected_sourcedegree(3, H) == Fraction(11, 6)
    for n in range(1, 12):
        assert E.saturation_expected_sourcedegree(n, H) == harmonic(n)


def test_saturation_limit_pmf():
    assert E.saturation_limit_pmf(1, Fraction(1, 4)) == Fraction(9, 16)
    for p in (Fraction(1, 4), H):
        assert E.saturation_limit_total_mass(p) == 1
    for p in (Fraction(3, 4), Fraction(2, 3)):
        assert E.saturation_limit_total_mass(p) == ((1 - p) / p) ** 2
    partial = sum(E.saturation_limit_pmf(m, Fraction(1, 4)) for m in range(1, 200))
    assert float(partial) == pytest.approx(1, abs=1e-6)


def test_bary_pathlength_b2_matches_binary():
    for n in range(1, 201):
        assert E.bary_expected_pathlength(n, 2) == pytest.approx(E.binary_expected_pathlength(n), rel=1e-9)


def test_table_serialisation():
    t = E.bernoulli_degree_pmf(3, H)
    d = t.to_dict()
    assert d["pmf"][0] == {"m": 1, "prob": "3/8"}
    assert t.to_csv().splitlines()[0].startswith("m,")


def test_exact_errors():
    with pytest.raises(ValueError):
        E.bernoulli_degree_pmf(0, H)
    with pytest.raises(ValueError):
        E.bernoulli_degree_pmf(3, Fraction(3, 2))
