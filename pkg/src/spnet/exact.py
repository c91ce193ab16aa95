"""Closed-form finite-n distributions and expectations.

Values are exact :class:`~fractions.Fraction` whenever ``p`` is given exactly
and the formula is rational in ``p``; otherwise floats.  The alternating sums
for the Bernoulli pmfs cancel heavily, so float mode is only trustworthy for
small ``n``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._numeric import (
    as_probability,
    binom_shift,
    fmt_rational,
    gbinom,
    harmonic,
    is_half,
)
from .network import Model, ModelConfig

SQRT2 = math.sqrt(2.0)
SQRT5 = math.sqrt(5.0)
RHO_SCALE = 0.89  # working scale for the binary path-count recurrence


@dataclass(frozen=True)
class ExactTable:
    """Exact pmf or expectation table.  Keys are ints or (m, l) tuples."""

    cfg: ModelConfig
    n: int
    quantity: str
    entries: dict
    numeric_mode: str = field(default="rational")

    def __getitem__(self, key):
        return self.entries.get(key, Fraction(0) if self.numeric_mode == "rational" else 0.0)

    def total(self):
        if self.numeric_mode == "rational":
            return sum(self.entries.values(), Fraction(0))
        return math.fsum(self.entries.values())

    def marginal(self, axis: int) -> dict:
        """Marginal of a joint table over index position ``axis`` (0 or 1)."""
        out: dict = {}
        for key, v in self.entries.items():
            out[key[axis]] = out.get(key[axis], 0) + v
        return dict(sorted(out.items()))

    def mean(self):
        if isinstance(next(iter(self.entries)), tuple):
            raise ValueError("mean is defined for one-dimensional tables")
        return sum((m * v for m, v in self.entries.items()), 0 * self.total())

    def _index_names(self) -> list[str]:
        key = next(iter(self.entries))
        return ["m", "l"] if isinstance(key, tuple) else ["m"]

    def to_dict(self) -> dict:
        names = self._index_names()
        rows = []
        for key, v in self.entries.items():
            idx = key if isinstance(key, tuple) else (key,)
            row = dict(zip(names, idx))
            row["prob"] = fmt_rational(v)
            rows.append(row)
        return {
            "config": self.cfg.to_dict(),
            "n": self.n,
            "quantity": self.quantity,
            "numeric_mode": self.numeric_mode,
            "pmf": rows,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self._index_names() + ["value"])
        for key, v in self.entries.items():
            idx = list(key) if isinstance(key, tuple) else [key]
            writer.writerow(idx + [fmt_rational(v)])
        return buf.getvalue()


def _mode(p) -> str:
    return "rational" if isinstance(p, Fraction) else "float"


def _sum(values, p):
    if isinstance(p, Fraction):
        return sum(values, Fraction(0))
    return math.fsum(values)


def _cast(value, p):
    """Round an exactly evaluated value for float-mode callers."""
    return value if isinstance(p, Fraction) else float(value)


def _check_n(n: int) -> None:
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")


def _table(model, p, n, quantity, entries) -> ExactTable:
    return ExactTable(ModelConfig(model, p=p), n, quantity, entries, _mode(p))


# --- Bernoulli model: degree, leftmost path, joint law ---------------------


def _alternating_pmf(n: int, p, arg) -> dict:
    """sum_j C(m-1, j) (-1)^(n+j-1) C(arg(j), n-1) for m = 1..n.

    The sums cancel heavily, so ``arg`` is always evaluated at the exact
    rational value of p and the results are rounded afterwards.
    """
    g = [gbinom(arg(j), n - 1) for j in range(n)]
    sign_n = -1 if n % 2 == 0 else 1  # (-1)^(n-1)
    out = {}
    for m in range(1, n + 1):
        terms = [
            math.comb(m - 1, j) * (sign_n if j % 2 == 0 else -sign_n) * g[j]
            for j in range(m)
        ]
        out[m] = _cast(sum(terms, Fraction(0)), p)
    return out


def bernoulli_degree_pmf(n: int, p) -> ExactTable:
    """P{D_n = m} for the source degree of the Bernoulli model."""
    _check_n(n)
    p = as_probability(p)
    pe = Fraction(p)
    entries = _alternating_pmf(n, p, lambda j: pe * (j + 1) - 1)
    return _table(Model.BERNOULLI, p, n, "degree-pmf", entries)


def bernoulli_degree_pmf_dp(n: int, p) -> ExactTable:
    """Same law by the one-step recursion of the growth rule."""
    _check_n(n)
    p = as_probability(p)
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    prev = [0 * one, one]  # index = degree
    for k in range(2, n + 1):
        cur = [0 * one] * (k + 1)
        for m in range(1, k + 1):
            if m <= k - 1:
                cur[m] += prev[m] * (1 - p * m / (k - 1))
            if m >= 2:
                cur[m] += prev[m - 1] * p * (m - 1) / (k - 1)
        prev = cur
    entries = {m: prev[m] for m in range(1, n + 1)}
    return _table(Model.BERNOULLI, p, n, "degree-pmf", entries)


def bernoulli_leftpath_pmf(n: int, p) -> ExactTable:
    """P{L_n^[L] = m}, the length of the leftmost source-to-sink path."""
    _check_n(n)
    p = as_probability(p)
    pe = Fraction(p)
    entries = _alternating_pmf(n, p, lambda j: j - pe * (j + 1))
    return _table(Model.BERNOULLI, p, n, "leftpath-pmf", entries)


def bernoulli_joint_pmf(n: int, p) -> ExactTable:
    """P{L_n = m, D_n = l}: random path length and source degree."""
    _check_n(n)
    p = as_probability(p)
    pe = Fraction(p)
    qe = 1 - pe
    g = [[gbinom(qe * i + pe * j, n - 1) for j in range(n)] for i in range(n)]
    sign_n = -1 if n % 2 == 0 else 1
    # A[m-1][i] = C(m-1, i) (-1)^i, entries = (-1)^(n-1) A g A^T
    a = [[math.comb(m, i) * (-1) ** i for i in range(m + 1)] for m in range(n)]
    inner = [
        [sum(g[i][j] * a[l - 1][j] for j in range(l)) for l in range(1, n + 1)]
        for i in range(n)
    ]
    entries = {}
    for m in range(1, n + 1):
        for l in range(1, n + 1):
            entries[(m, l)] = _cast(
                sign_n * sum(a[m - 1][i] * inner[i][l - 1] for i in range(m)), p
            )
    return _table(Model.BERNOULLI, p, n, "joint-pmf", entries)


def bernoulli_degree_factorial_moment(n: int, r: int, p):
    """E(D_n (D_n - 1) ... (D_n - r + 1))."""
    _check_n(n)
    if r < 0:
        raise ValueError("r must be nonnegative")
    p = as_probability(p)
    if r == 0:
        return Fraction(1) if isinstance(p, Fraction) else 1.0
    pe = Fraction(p)
    terms = [
        math.comb(r - 1, j) * (-1) ** (r - 1 - j) * gbinom(n + pe * (j + 1) - 1, n - 1)
        for j in range(r)
    ]
    return _cast(math.factorial(r) * sum(terms, Fraction(0)), p)


# --- Bernoulli model: number of paths ---------------------------------------


def bernoulli_expected_paths_table(n: int, p) -> list:
    """[E(P_1), ..., E(P_n)] from the quadratic recurrence, O(n^2)."""
    _check_n(n)
    p = as_probability(p)
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    e = [0 * one, one]
    prefix = one
    for k in range(2, n + 1):
        conv = _sum([e[i] * e[k - i] for i in range(1, k)], p)
        e.append((2 * p * prefix + (1 - p) * conv) / (k - 1))
        prefix += e[k]
    return e[1:]


def bernoulli_expected_paths(n: int, p):
    return bernoulli_expected_paths_table(n, p)[-1]


def complete_bell(k: int, xs: Sequence):
    """Complete Bell polynomial B_k(x_1, ..., x_k)."""
    if len(xs) < k:
        raise ValueError(f"need {k} arguments, got {len(xs)}")
    b = [1]
    for m in range(k):
        b.append(sum(math.comb(m, i) * b[m - i] * xs[i] for i in range(m + 1)))
    return b[k]


def bernoulli_expected_paths_closed(n: int, p):
    """E(P_n) from the explicit formulas (separate branch at p = 1/2)."""
    _check_n(n)
    p = as_probability(p)
    if is_half(p):
        exact = isinstance(p, Fraction)
        xs = [
            -math.factorial(i - 1) * harmonic(n - 1, i, exact=exact)
            for i in range(1, n)
        ]
        terms = [
            Fraction((-1) ** k, 2**k) * complete_bell(k, xs) if exact
            else (-1) ** k / 2**k * complete_bell(k, xs)
            for k in range(n)
        ]
        return _sum(terms, p)
    pe = Fraction(p)
    s = 2 * pe - 1
    ratio = pe / s
    powers = [ratio**k for k in range(n)]
    out = []
    for j in range(n):
        inner = sum(math.comb(k, j) * powers[k] for k in range(j, n))
        sign = 1 if (n + j - 1) % 2 == 0 else -1
        out.append(sign * gbinom(s * j - 1, n - 1) * inner)
    return _cast(sum(out, Fraction(0)), p)


# --- binary model -----------------------------------------------------------


def binary_expected_pathlength(n: int) -> float:
    _check_n(n)
    a = (3 + SQRT5) / (2 * SQRT5)
    b = (3 - SQRT5) / (2 * SQRT5)
    return n * (
        a * binom_shift(SQRT5 / 2 - 1.5, n) - b * binom_shift(-SQRT5 / 2 - 1.5, n)
    )


def binary_expected_sinkdegree(n: int) -> float:
    _check_n(n)
    return (1 + SQRT2) / 2 * binom_shift(SQRT2 - 1, n - 1) - (SQRT2 - 1) / 2 * binom_shift(
        -SQRT2 - 1, n - 1
    )


def binary_expected_paths_exact(n: int) -> list[Fraction]:
    """[E_1, ..., E_n] for the binary path count, in exact rationals."""
    _check_n(n)
    e = [Fraction(0), Fraction(1), Fraction(2)]
    for m in range(3, n + 1):
        acc = sum(((k - 1) * e[k] * (1 + e[m - k]) for k in range(2, m)), Fraction(0))
        e.append(acc / ((m - 1) * (m - 2)))
    return e[1 : n + 1]


def binary_expected_paths_scaled(n: int, scale: float = RHO_SCALE) -> np.ndarray:
    """Mantissas e_k = E_k * scale**k for k = 0..n (index 0 unused).

    The recurrence is linear in the pairing (k, m - k), so multiplying by
    ``scale**m`` keeps every term on a common scale; the ``1`` inside
    ``1 + E_{m-k}`` becomes ``scale**(m-k)``.  With scale near rho the
    mantissas stay O(1) for n up to 10^4 and beyond.
    """
    _check_n(n)
    e = np.zeros(n + 1)
    e[1] = scale
    if n >= 2:
        e[2] = 2 * scale**2
    powers = scale ** np.arange(n + 1, dtype=float)
    k = np.arange(n + 1, dtype=float)
    for m in range(3, n + 1):
        ks = slice(2, m)
        rest = m - np.arange(2, m)
        e[m] = np.dot((k[ks] - 1) * e[ks], powers[rest] + e[rest]) / ((m - 1) * (m - 2))
    return e


def binary_expected_paths(n: int, exact: bool = False):
    """E(P_n) for the binary model.

    ``exact=True`` returns a Fraction.  Otherwise ``(mantissa, log_scale)`` with
    E(P_n) = mantissa * exp(log_scale), which stays finite for large n.
    """
    if exact:
        return binary_expected_paths_exact(n)[-1]
    e = binary_expected_paths_scaled(n)
    return float(e[n]), -n * math.log(RHO_SCALE)


# --- preferential and saturation models -------------------------------------


def preferential_expected_sourcedegree(n: int, p):
    """E(D_n) by coefficient extraction with running term ratios.

    E(D_n) = (n!/T_n) [z^n] M_1(z) with
    M_1(z) = ((1 - 2z)^(-p/2) - (1 - 2z)^(1/2)) / (1 + p).  Writing
    g_n = (n!/T_n) [z^n] (1 - 2z)^(-p/2) and h_n for the second series, the
    ratios are g_{n+1}/g_n = (2n + p)/(2n - 1) and h_{n+1}/h_n = 1.
    """
    _check_n(n)
    p = as_probability(p)
    g = p  # g_1 = 1 * 2 * (p/2)
    h = -1  # h_1 = 1 * (-2) * (1/2), and every later ratio is 1
    for k in range(1, n):
        g = g * (2 * k + p) / (2 * k - 1)
    return (g - h) / (1 + p)


def saturation_expected_sourcedegree(n: int, p):
    _check_n(n)
    p = as_probability(p)
    if is_half(p):
        return harmonic(n, exact=isinstance(p, Fraction))
    return (1 - binom_shift(2 * p - 1, n)) / (1 - 2 * p)


def saturation_limit_pmf(m: int, p):
    """Limit of P{D_n = m}: C(2m, m) p^(m-1) (1-p)^(m+1) / (m+1)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    p = as_probability(p)
    return math.comb(2 * m, m) * p ** (m - 1) * (1 - p) ** (m + 1) / (m + 1)


def saturation_limit_total_mass(p):
    """sum_m p_m in closed form via the Catalan generating function.

    p_m = (q/p) Cat_m (pq)^m, so the sum is (q/p)(C(pq) - 1) with
    C(x) = (1 - sqrt(1 - 4x))/(2x) and sqrt(1 - 4pq) = |1 - 2p|.
    """
    p = as_probability(p)
    q = 1 - p
    x = p * q
    return q / p * ((1 - abs(1 - 2 * p)) / (2 * x) - 1)


# --- b-ary model ------------------------------------------------------------


def bary_expected_pathlength(n: int, b: int) -> float:
    """E(L_n) = sum_i beta_i C(n + lambda_i - 1, n - 1) over the b-ary spectrum."""
    _check_n(n)
    from .asymptotics import bary_spectrum

    spec = bary_spectrum(b)
    total = sum(beta * binom_shift(complex(lam), n - 1) for lam, beta in zip(spec.roots, spec.betas))
    if abs(total.imag) > 1e-9 * max(1.0, abs(total)):
        raise ArithmeticError(f"imaginary residue {total.imag:g} in b-ary E(L_n)")
    return total.real
