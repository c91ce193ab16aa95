import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from spnet import asymptotics as A
from spnet import exact as E

PHI = (math.sqrt(5) - 1) / 2


def test_mittag_leffler_moments():
    assert A.mittag_leffler_moment(2, 0.5) == pytest.approx(2.0)
    assert A.mittag_leffler_moment(1, 0.5) == pytest.approx(2 / math.sqrt(math.pi))
    assert A.mittag_leffler_moment(0, 0.3) == 1


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.0, 5.0])
def test_half_normal_density(x):
    want = math.exp(-x * x / 4) / math.sqrt(math.pi)
    assert A.mittag_leffler_density(x, 0.5) == pytest.approx(want, abs=1e-8)


@pytest.mark.parametrize("p", [0.3, 0.5, 0.7])
def test_density_mass_and_moments(p):
    assert A.mittag_leffler_density_moment(0, p) == pytest.approx(1, abs=1e-6)
    for r in (1, 2, 3):
        assert A.mittag_leffler_density_moment(r, p) == pytest.approx(
            A.mittag_leffler_moment(r, p), abs=1e-5
        )


def test_rotated_ray_agrees_where_real_form_is_stable():
    for x in (0.5, 1.0, 2.0):
        assert A.mittag_leffler_density(x, 0.7, method="rotated") == pytest.approx(
            A.mittag_leffler_density(x, 0.7, method="real"), rel=1e-7
        )


def test_second_moment_by_quadrature():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        val, _ = integrate.quad(lambda x: x * x * A.mittag_leffler_density(x, 0.4), 0, 60, limit=200)
    assert val == pytest.approx(2 / math.gamma(1.8), rel=1e-5)


def test_density_rejects_bad_input():
    with pytest.raises(ValueError):
        A.mittag_leffler_density(1.0, 1.5)


def test_binary_length_coefficients():
    c = A.binary_length_coefficients(30)
    assert c[1] == pytest.approx((3 + PHI) / 5, rel=1e-14)
    proof = A.binary_length_coefficients_proof(30)
    for r in range(31):
        assert c[r] == pytest.approx(proof[r] / math.factorial(r), rel=1e-12)


def test_binary_length_first_moment_matches_large_n():
    n = 10**5
    seq = A.binary_length_limit_moments(3)
    assert seq.values[1] == pytest.approx(E.binary_expected_pathlength(n) / n**PHI, rel=1e-3)


def test_binary_degree_coefficients():
    c = A.binary_degree_coefficients(30)
    assert c[1] == pytest.approx((1 + math.sqrt(2)) / (2 * math.sqrt(2)), rel=1e-14)
    proof = A.binary_degree_coefficients_proof(30)
    for r in range(31):
        assert c[r] == pytest.approx(proof[r] / math.factorial(r), rel=1e-12)
    n = 10**5
    seq = A.binary_degree_limit_moments(3)
    lim = E.binary_expected_sinkdegree(n) / n ** (math.sqrt(2) - 1)
    assert seq.values[1] == pytest.approx(lim, abs=1e-3)


@pytest.mark.parametrize("p", [Fraction(1, 3), Fraction(1, 2), Fraction(4, 5)])
def test_preferential_alpha(p):
    rec = A.preferential_alpha_recurrence(20, p)
    assert rec[1] == 1 / (p + 1)
    for r in range(1, 21):
        assert float(rec[r]) == pytest.approx(float(A.preferential_alpha_closed(r, p)), rel=1e-9)


def test_saturation_alpha():
    p = Fraction(3, 4)
    rec = A.saturation_alpha_recurrence(20, p)
    for r in range(1, 21):
        want = math.factorial(r) * p ** (2 * r) / (2 * p - 1) ** (2 * r - 1)
        assert rec[r] == want
        assert A.saturation_alpha_closed(r, p) == want


def test_saturation_needs_p_above_half():
    with pytest.raises(ValueError):
        A.saturation_limit_moments(3, Fraction(1, 3))


@pytest.mark.parametrize(
    "seq",
    [
        A.binary_length_limit_moments(6),
        A.binary_degree_limit_moments(6),
        A.preferential_limit_moments(6, Fraction(1, 3)),
        A.saturation_limit_moments(6, Fraction(3, 4)),
    ],
    ids=["binary-length", "binary-degree", "preferential", "saturation"],
)
def test_moment_sequences_are_moment_sequences(seq):
    assert seq.values[0] == pytest.approx(1)
    for det in seq.hankel_determinants((2, 3)).values():
        assert det >= -1e-9


def test_characteristic_polynomial_b2():
    spec = A.bary_spectrum(2)
    assert spec.dominant == pytest.approx(PHI, abs=1e-12)
    roots = sorted(z.real for z in spec.roots)
    assert roots[0] == pytest.approx(-(1 + math.sqrt(5)) / 2, abs=1e-12)


def test_b3_dominant_root_bracket():
    spec = A.bary_spectrum(3)
    assert 0.50 < spec.dominant < 0.55
    f = lambda x: x * (x + 1) * (x + 2) - 2  # noqa: E731
    assert f(0.50) < 0 < f(0.55)


@pytest.mark.parametrize("b", range(2, 9))
def test_spectrum_properties(b):
    spec = A.bary_spectrum(b)
    assert spec.residual < 1e-10 * math.factorial(b - 1)
    for k, s in enumerate(spec.identity_sums()):
        assert abs(s - math.factorial(k)) <= 1e-8 * math.factorial(k)
    roots = spec.roots
    # conjugate symmetry
    for z in roots:
        assert min(abs(z.conjugate() - w) for w in roots) < 1e-9
    # no real root in (-(b-1), 0) and exactly one positive real root
    real = [z.real for z in roots if abs(z.imag) < 1e-9]
    assert not any(-(b - 1) < x < 0 for x in real)
    assert sum(x > 0 for x in real) == 1


def test_bary_spectrum_serialises():
    d = A.bary_spectrum(3).to_dict()
    assert set(d["roots"][0]) == {"re", "im"}


def test_characteristic_coefficients():
    # lambda (lambda + 1) (lambda + 2) - 2
    assert tuple(A.characteristic_coefficients(3)) in ((1, 3, 2, -2), (-2, 2, 3, 1))


def test_bernoulli_paths_constant():
    half = A.bernoulli_paths_constant(Fraction(1, 2))
    assert half == pytest.approx(1 / (1 - math.exp(-2)))
    assert half == pytest.approx(1.15652, abs=1e-5)
    for eps in (1e-6, -1e-6):
        assert A.bernoulli_paths_constant(0.5 + eps) == pytest.approx(half, abs=1e-4)


def test_bernoulli_paths_growth_p_third():
    p = Fraction(1, 3)
    alpha = A.bernoulli_paths_constant(p)
    e = E.bernoulli_expected_paths_table(2000, 1 / 3)
    ratios = [e[n - 1] * (1 - 1 / 3) / alpha**n for n in (500, 1000, 2000)]
    assert abs(ratios[-1] - 1) < abs(ratios[0] - 1) + 1e-12
    assert ratios[-1] == pytest.approx(1, abs=1e-2)


def test_rho_leading_term():
    est = A.binary_paths_rho(2000)
    mant, log_scale = E.binary_expected_paths(2000)
    lead = math.exp(math.log(mant) + log_scale + 2000 * math.log(est.rho)) / 2
    assert lead == pytest.approx(1, abs=1e-2)
    assert est.error < 1e-8
    assert est.rho == pytest.approx(0.8989, abs=1e-4)


def test_rho_second_order_constant():
    # observed slope (1 - E_n rho^n / 2)(n-1)(n-2), with a 1/3 in the constant
    est = A.binary_paths_rho(2000)
    rho = est.rho
    n = 2000
    e = E.binary_expected_paths_scaled(n)
    lead = np.exp(np.log(e[n]) - n * math.log(E.RHO_SCALE) + n * math.log(rho)) / 2
    slope = (1 - lead) * (n - 1) * (n - 2)
    assert slope == pytest.approx(rho**2 / (3 * (rho - 1) ** 2), rel=0.05)


def test_rho_requires_enough_terms():
    with pytest.raises(ValueError):
        A.binary_paths_rho(50)
