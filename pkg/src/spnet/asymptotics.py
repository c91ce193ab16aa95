"""Limit laws and the constants that drive them.

Mittag-Leffler moments and density, the convolution-type moment recurrences
of the binary model, the coefficient sequences of the preferential and
saturation models, the b-ary characteristic spectrum, the Bernoulli
path-growth constant and a numerical estimate of the binary path-count
singularity.
"""

from __future__ import annotations

import cmath
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate

from ._numeric import as_probability, is_half, rising

PHI = (math.sqrt(5.0) - 1) / 2
SQRT2 = math.sqrt(2.0)
EXP_CUTOFF = 45.0  # integrands below e^-45 are dropped


def gamma(x: float) -> float:
    if x > 170:
        raise OverflowError("use math.lgamma for large arguments")
    return math.gamma(x)


@dataclass(frozen=True)
class MomentSequence:
    """Limit moments E(X^r), r = 0..r_max, with the coefficients behind them."""

    law: str
    r_max: int
    values: list
    coefficients: list
    recurrence: str
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "law": self.law,
            "params": self.params,
            "r_max": self.r_max,
            "recurrence": self.recurrence,
            "moments": [float(v) for v in self.values],
            "coefficients": [float(c) for c in self.coefficients],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def hankel_determinants(self, sizes=(2, 3)) -> dict[int, float]:
        out = {}
        for k in sizes:
            if 2 * (k - 1) > self.r_max:
                continue
            h = np.array([[self.values[i + j] for j in range(k)] for i in range(k)], dtype=float)
            out[k] = float(np.linalg.det(h))
        return out


# --- Mittag-Leffler law -----------------------------------------------------


def mittag_leffler_moment(r: int, p: float) -> float:
    if r < 0:
        raise ValueError("r must be nonnegative")
    return math.exp(math.lgamma(r + 1) - math.lgamma(r * float(p) + 1))


def _peak_exponent(x: float, p: float) -> float:
    """max over w >= 0 of -w^(1/p) - x w cos(pi p)."""
    c = math.cos(math.pi * p)
    if c >= 0:
        return 0.0
    a = -x * c
    w = (a * p) ** (p / (1 - p))
    return -(w ** (1 / p)) + a * w


def _truncation(x: float, p: float, c: float) -> float:
    """Point beyond which the integrand envelope stays below e^-45."""
    w = 1.0
    if c < 0:
        w = max(w, 2 * (-x * c * p) ** (p / (1 - p)))
    while -(w ** (1 / p)) - x * w * c > -EXP_CUTOFF:
        w *= 1.5
    return w


def _quad(f, lo: float, hi: float, **kw) -> float:
    # roundoff warnings near the 1e-14 floor are expected; accuracy is
    # checked against the moment formula instead
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(f, lo, hi, **kw)[0]


def _density_real(x: float, p: float) -> float:
    a = math.pi * p
    c, s = math.cos(a), math.sin(a)
    upper = _truncation(x, p, c)

    def f(w):
        return math.exp(-(w ** (1 / p)) - x * w * c) * math.sin(a - x * w * s)

    val = _quad(f, 0.0, upper, epsabs=1e-14, epsrel=1e-12, limit=500)
    return val / (math.pi * p)


def _density_rotated(x: float, p: float) -> float:
    """Same integral along the ray w = r e^(-i theta), where nothing grows.

    The integrand exp(-w^(1/p) - x w e^(i pi p)) is analytic in the sector
    swept by the rotation and decays on the closing arc as long as
    pi p - pi/2 < theta < pi p / 2, which is a nonempty range for p < 1.
    """
    theta = (1.5 * math.pi * p - 0.5 * math.pi) / 2
    theta = max(theta, 0.0)
    k1 = cmath.exp(-1j * theta / p)
    k2 = x * cmath.exp(1j * (math.pi * p - theta))
    pre = cmath.exp(1j * (math.pi * p - theta))
    decay1, decay2 = k1.real, k2.real
    upper = 1.0
    while -(upper ** (1 / p)) * decay1 - upper * decay2 > -EXP_CUTOFF:
        upper *= 1.5

    def f(r):
        return (pre * cmath.exp(-(r ** (1 / p)) * k1 - r * k2)).imag

    val = _quad(f, 0.0, upper, epsabs=1e-14, epsrel=1e-12, limit=500)
    return val / (math.pi * p)


def mittag_leffler_density(x: float, p: float, method: str = "auto") -> float:
    """Density of the Mittag-Leffler(p) law (moments r!/Gamma(rp+1)).

    f(x) = 1/(pi p) int_0^inf exp(-w^(1/p) - x w cos(pi p))
                               sin(pi p - x w sin(pi p)) dw.

    ``method="real"`` integrates this literally.  For p > 1/2 the factor
    exp(-x w cos(pi p)) grows and the oscillating integrand cancels badly once
    its peak is large, so ``"auto"`` switches to a rotated ray there.
    """
    if x <= 0:
        raise ValueError("the density is evaluated for x > 0")
    p = float(p)
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    if method == "auto":
        method = "real" if _peak_exponent(x, p) < 3.0 else "rotated"
    if method == "real":
        return _density_real(x, p)
    if method == "rotated":
        return _density_rotated(x, p)
    raise ValueError(f"unknown method {method!r}")


def mittag_leffler_tail_point(p: float) -> float:
    """x beyond which the density is below roughly e^-45.

    The right tail behaves like exp(-c x^(1/(1-p))) with
    c = (1 - p) p^(p/(1-p)).
    """
    p = float(p)
    c = (1 - p) * p ** (p / (1 - p))
    return (EXP_CUTOFF / c) ** (1 - p)


def mittag_leffler_density_moment(r: int, p: float) -> float:
    """int_0^X x^r f(x) dx by nested quadrature (X from the tail rule)."""
    upper = mittag_leffler_tail_point(p)
    # Gauss-Kronrod never evaluates the endpoint x = 0
    return _quad(
        lambda x: x**r * mittag_leffler_density(x, p),
        0.0,
        upper,
        epsabs=1e-12,
        epsrel=1e-10,
        limit=400,
    )


# --- binary model: path length and sink degree ------------------------------


def binary_length_coefficients(r_max: int) -> list[float]:
    """c_r with c_0 = 1, c_1 = (3 + phi)/5 and
    c_r = sum_{k=1}^{r-1} (k phi + 1) c_k c_{r-k} / ((r-1) phi ((r+1) phi + 1)).
    """
    c = [1.0, (3 + PHI) / 5]
    for r in range(2, r_max + 1):
        s = math.fsum((k * PHI + 1) * c[k] * c[r - k] for k in range(1, r))
        c.append(s / ((r - 1) * PHI * ((r + 1) * PHI + 1)))
    return c[: r_max + 1]


def binary_length_coefficients_proof(r_max: int) -> list[float]:
    """Unsimplified factorial-moment form on c~_r (binomial weights).

    c~_r = (1/sqrt5)(1/((r-1)phi) - 1/((r+1)phi+1))
           sum_k C(r,k)(k phi + 1) c~_k c~_{r-k},
    with c~_1 = (1 + sqrt5)/(2 sqrt5).
    """
    s5 = math.sqrt(5.0)
    c = [1.0, (1 + s5) / (2 * s5)]
    for r in range(2, r_max + 1):
        factor = (1 / ((r - 1) * PHI) - 1 / ((r + 1) * PHI + 1)) / s5
        s = math.fsum(math.comb(r, k) * (k * PHI + 1) * c[k] * c[r - k] for k in range(1, r))
        c.append(factor * s)
    return c[: r_max + 1]


def binary_length_limit_moments(r_max: int) -> MomentSequence:
    c = binary_length_coefficients(r_max)
    values = [
        math.exp(math.lgamma(r + 1) - math.lgamma(r * PHI + 1)) * c[r] for r in range(r_max + 1)
    ]
    return MomentSequence(
        "binary-length", r_max, values, c, "c_r convolution, E(L^r) = r! c_r / Gamma(r phi + 1)"
    )


def binary_degree_coefficients(r_max: int) -> list[float]:
    """c_r = sum_{k=1}^{r-1} c_k c_{r-k} / ((r(sqrt2 - 1) + 1)^2 - 2)."""
    c = [1.0, (1 + SQRT2) / (2 * SQRT2)]
    for r in range(2, r_max + 1):
        s = math.fsum(c[k] * c[r - k] for k in range(1, r))
        c.append(s / ((r * (SQRT2 - 1) + 1) ** 2 - 2))
    return c[: r_max + 1]


def binary_degree_coefficients_proof(r_max: int) -> list[float]:
    """Unsimplified binomial form on c~_r.

    c~_r = (1/(2 sqrt2))(1/((r-1)sqrt2 - r + 1) - 1/((r+1)sqrt2 - r + 1))
           sum_k C(r,k) c~_k c~_{r-k}.
    """
    c = [1.0, (1 + SQRT2) / (2 * SQRT2)]
    for r in range(2, r_max + 1):
        factor = (1 / ((r - 1) * SQRT2 - r + 1) - 1 / ((r + 1) * SQRT2 - r + 1)) / (2 * SQRT2)
        s = math.fsum(math.comb(r, k) * c[k] * c[r - k] for k in range(1, r))
        c.append(factor * s)
    return c[: r_max + 1]


def binary_degree_limit_moments(r_max: int) -> MomentSequence:
    c = binary_degree_coefficients(r_max)
    g = SQRT2 - 1
    values = [
        math.exp(math.lgamma(r + 1) - math.lgamma(r * g + 1)) * (r * g + 1) * c[r]
        for r in range(r_max + 1)
    ]
    return MomentSequence(
        "binary-degree",
        r_max,
        values,
        c,
        "c_r convolution, E(D^r) = r! (r g + 1) c_r / Gamma(r g + 1), g = sqrt2 - 1",
    )


# --- preferential model -----------------------------------------------------


def preferential_alpha_recurrence(r_max: int, p) -> list:
    """alpha_0..alpha_rmax from the trinomial double-sum recurrence.

    alpha_0 = -1, alpha_1 = 1/(p+1), beta_r = (rp + r - 1) alpha_r and
    alpha_r = p/((r-1)(p+1)) sum_{r0=0}^{r-2} sum_{r1=0}^{r-1-r0}
              (r-1)!/(r0! r1! r2!) alpha_{r0+1} beta_{r1} beta_{r2},
    r2 = r - 1 - r0 - r1.
    """
    p = as_probability(p)
    alpha = [-1 + 0 * p, 1 / (p + 1)]
    beta = [(0 * p - 1) * alpha[0], p * alpha[1]]
    for r in range(2, r_max + 1):
        total = 0 * p
        for r0 in range(r - 1):
            for r1 in range(r - r0):
                r2 = r - 1 - r0 - r1
                multi = math.factorial(r - 1) // (
                    math.factorial(r0) * math.factorial(r1) * math.factorial(r2)
                )
                total += multi * alpha[r0 + 1] * beta[r1] * beta[r2]
        alpha.append(p / ((r - 1) * (p + 1)) * total)
        beta.append((r * p + r - 1) * alpha[r])
    return alpha[: r_max + 1]


def preferential_alpha_closed(r: int, p):
    """(r-1)! p^(r-1) C(r(p+1) - 2, r - 1) / (p+1)^(2r-1), r >= 1."""
    from ._numeric import gbinom

    if r < 1:
        raise ValueError("closed form holds for r >= 1")
    p = as_probability(p)
    return math.factorial(r - 1) * p ** (r - 1) * gbinom(r * (p + 1) - 2, r - 1) / (p + 1) ** (
        2 * r - 1
    )


def preferential_moment_scale(r: int, p: float) -> float:
    """Constant in E(D_n^r) ~ scale * n^(r(p+1)/2) obtained from alpha_r."""
    p = float(p)
    return (
        float(preferential_alpha_closed(r, p))
        * 2
        * math.sqrt(math.pi)
        / math.gamma(r * (p + 1) / 2 - 0.5)
    )


def preferential_limit_moments(r_max: int, p) -> MomentSequence:
    """Moments Gamma(r(p+1)/2 + 1)/Gamma(rp + 1) of the normalised limit.

    The alpha_r coefficients are computed twice (recurrence and closed form)
    and must agree to 1e-9 relative for r <= 20.
    """
    pf = float(as_probability(p))
    rec = preferential_alpha_recurrence(min(r_max, 20), pf)
    for r in range(1, len(rec)):
        closed = float(preferential_alpha_closed(r, pf))
        if abs(rec[r] - closed) > 1e-9 * abs(closed):
            raise ArithmeticError(f"alpha_{r} recurrence {rec[r]} != closed form {closed}")
    values = [
        math.exp(math.lgamma(r * (pf + 1) / 2 + 1) - math.lgamma(r * pf + 1))
        for r in range(r_max + 1)
    ]
    coeffs = [-1.0] + [float(preferential_alpha_closed(r, pf)) for r in range(1, r_max + 1)]
    return MomentSequence(
        "preferential-degree",
        r_max,
        values,
        coeffs,
        "alpha_r double sum; E(Y^r) = Gamma(r(p+1)/2 + 1)/Gamma(rp + 1)",
        {"p": pf},
    )


# --- saturation model -------------------------------------------------------


def saturation_alpha_recurrence(r_max: int, p) -> list:
    """alpha_1 = p^2/(2p-1), alpha_r = sum C(r,l) alpha_l alpha_{r-l} / ((r-1)(2p-1))."""
    p = as_probability(p)
    s = 2 * p - 1
    alpha = [0 * p, p * p / s]
    for r in range(2, r_max + 1):
        total = sum((math.comb(r, l) * alpha[l] * alpha[r - l] for l in range(1, r)), 0 * p)
        alpha.append(total / ((r - 1) * s))
    return alpha[: r_max + 1]


def saturation_alpha_closed(r: int, p):
    p = as_probability(p)
    return math.factorial(r) * p ** (2 * r) / (2 * p - 1) ** (2 * r - 1)


def saturation_limit_moments(r_max: int, p) -> MomentSequence:
    """Mixture moments of (2p-1)^2 D_n / (p^2 n^(2p-1)) for 1/2 < p < 1.

    The limit is an atom at 0 with mass 1 - (2p-1)/p^2 plus (2p-1)/p^2 times
    a Mittag-Leffler(2p-1) law, so E(X^0) = 1 and
    E(X^r) = (2p-1)/p^2 * r!/Gamma(r(2p-1)+1) for r >= 1.
    """
    pf = float(as_probability(p))
    if pf <= 0.5:
        raise ValueError("continuous limit only for p > 1/2; use saturation_limit_pmf")
    w = (2 * pf - 1) / pf**2
    values = [1.0] + [w * mittag_leffler_moment(r, 2 * pf - 1) for r in range(1, r_max + 1)]
    coeffs = [0.0] + [float(saturation_alpha_closed(r, pf)) for r in range(1, r_max + 1)]
    return MomentSequence(
        "saturation-degree",
        r_max,
        values,
        coeffs,
        "alpha_r = r! p^(2r)/(2p-1)^(2r-1); mixture of an atom at 0 and ML(2p-1)",
        {"p": pf, "continuous_mass": w},
    )


# --- b-ary characteristic spectrum ------------------------------------------


@lru_cache(maxsize=None)
def characteristic_coefficients(b: int) -> tuple[int, ...]:
    """Integer coefficients (constant term first) of lambda^(rising b) - (b-1)!.

    The rising factorial expands into unsigned Stirling numbers of the first
    kind, built here by repeated multiplication with (lambda + k).
    """
    coeffs = [1]
    for k in range(b):
        nxt = [0] * (len(coeffs) + 1)
        for i, a in enumerate(coeffs):
            nxt[i] += a * k
            nxt[i + 1] += a
        coeffs = nxt
    coeffs[0] -= math.factorial(b - 1)
    return tuple(coeffs)


def _char_value(lam: complex, b: int) -> complex:
    return rising(lam, b) - math.factorial(b - 1)


def _newton_ratio(lam: complex, b: int) -> complex:
    """P(lam)/P'(lam) evaluated in product form."""
    prod = rising(lam, b)
    deriv = prod * sum(1 / (lam + k) for k in range(b))
    return (prod - math.factorial(b - 1)) / deriv


@dataclass(frozen=True)
class CharacteristicSpectrum:
    b: int
    roots: list
    betas: list
    residual: float

    @property
    def dominant(self) -> float:
        return self.roots[0].real

    def identity_sums(self) -> list[complex]:
        """S_k = sum_i beta_i (lambda_i + 1)^(rising k), k = 0..b-1 (should be k!)."""
        return [
            sum(beta * rising(lam + 1, k) for lam, beta in zip(self.roots, self.betas))
            for k in range(self.b)
        ]

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "lambda_1": self.dominant,
            "roots": [{"re": z.real, "im": z.imag} for z in self.roots],
            "betas": [{"re": z.real, "im": z.imag} for z in self.betas],
            "residual": self.residual,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _aberth(b: int, start: list[complex], tol: float, max_iter: int) -> list[complex]:
    z = list(start)
    for _ in range(max_iter):
        biggest = 0.0
        for i in range(b):
            n = _newton_ratio(z[i], b)
            s = sum(1 / (z[i] - z[j]) for j in range(b) if j != i)
            w = n / (1 - n * s)
            z[i] -= w
            biggest = max(biggest, abs(w) / max(1.0, abs(z[i])))
        if biggest < tol:
            break
    return z


@lru_cache(maxsize=None)
def bary_spectrum(b: int) -> CharacteristicSpectrum:
    """All roots of lambda (lambda+1) ... (lambda+b-1) = (b-1)! and the beta_i."""
    if int(b) != b or not 2 <= b <= 64:
        raise ValueError("b must be an integer in [2, 64]")
    b = int(b)
    scale = math.factorial(b - 1)
    centre = -(b - 1) / 2
    radius = (b + 1) / 2
    for attempt in range(5):
        offset = 0.4 + 0.37 * attempt
        start = [
            centre + radius * cmath.exp(1j * (2 * math.pi * k / b + offset)) for k in range(b)
        ]
        z = _aberth(b, start, 1e-15, 500)
        # a few Newton polishing steps in product form
        for _ in range(3):
            z = [lam - _newton_ratio(lam, b) for lam in z]
        residual = max(abs(_char_value(lam, b)) for lam in z)
        gaps = min(abs(z[i] - z[j]) for i in range(b) for j in range(i))
        if residual < 1e-12 * scale and gaps > 1e-8:
            break
    else:
        raise ArithmeticError(f"root finder did not converge for b = {b}")
    z = [complex(lam.real, 0.0) if abs(lam.imag) < 1e-12 * max(1, abs(lam)) else lam for lam in z]
    dominant = [lam for lam in z if lam.imag == 0 and 0 < lam.real < 1]
    if len(dominant) != 1:
        raise ArithmeticError(f"expected one root in (0, 1), found {len(dominant)}")
    rest = sorted((lam for lam in z if lam is not dominant[0]), key=lambda c: (-c.real, -c.imag))
    roots = dominant + rest
    betas = [1 / (1 + lam * sum(1 / (lam + k) for k in range(1, b))) for lam in roots]
    return CharacteristicSpectrum(b, roots, betas, residual)


# --- Bernoulli path count ---------------------------------------------------


def bernoulli_paths_constant(p) -> float:
    """alpha_p with E(P_n) ~ alpha_p^n / (1 - p)."""
    p = as_probability(p)
    if is_half(p):
        return 1 / (1 - math.exp(-2.0))
    pf = float(p)
    t = math.exp((math.log(pf) - math.log1p(-pf)) / (1 - 2 * pf))
    return 1 / (1 - t)


# --- binary path count: dominant singularity --------------------------------


@dataclass(frozen=True)
class RhoEstimate:
    rho: float
    error: float
    n_max: int
    k_fit: float
    series: list  # (n, raw ratio, accelerated estimate)


def binary_paths_rho(n_max: int = 2000) -> RhoEstimate:
    """Estimate rho from ratios r_n = E_{n-1}/E_n of the binary path counts.

    E_n ~ (2/rho^n)(1 - c/((n-1)(n-2))) makes r_n = rho - K/((n-1)(n-2)(n-3))
    up to higher order, so pairs (n/2, n) are combined to eliminate K.
    """
    from .exact import RHO_SCALE, binary_expected_paths_scaled

    if n_max < 100:
        raise ValueError("n_max must be at least 100")
    e = binary_expected_paths_scaled(n_max)
    ratio = lambda n: RHO_SCALE * e[n - 1] / e[n]  # noqa: E731
    g = lambda n: 1.0 / ((n - 1) * (n - 2) * (n - 3))  # noqa: E731

    def accelerate(n: int) -> tuple[float, float]:
        m = n // 2
        k = (ratio(m) - ratio(n)) / (g(n) - g(m))
        return ratio(n) + k * g(n), k

    series = []
    for n in sorted({n_max // 8, n_max // 4, n_max // 2, n_max}):
        if n >= 50:
            est, _ = accelerate(n)
            series.append((n, ratio(n), est))
    rho, k = accelerate(n_max)
    err = abs(series[-1][2] - series[-2][2]) if len(series) > 1 else float("nan")
    return RhoEstimate(rho, err, n_max, k, series)
