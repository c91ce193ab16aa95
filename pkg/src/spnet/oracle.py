"""Exhaustive enumeration of growth histories with exact probabilities.

Every selection (and colour) sequence is walked depth first; each leaf is a
network whose statistics are accumulated, weighted by the exact probability
of its history.  This is the ground truth the closed forms are checked
against, so it uses nothing from :mod:`spnet.exact`.
"""

from __future__ import annotations

import builtins
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate

from ._numeric import fmt_rational
from .network import (
    Model,
    ModelConfig,
    SPNetwork,
    count_paths,
    leftmost_path_length,
    random_path_length_pmf,
    selection_weights,
    sink_degree,
    source_degree,
)

MAX_N_COLORED = 8
MAX_N_UNCOLORED = 9

STAT_NAMES = ("source_degree", "sink_degree", "leftmost_length", "random_length", "path_count")


class OracleBudgetError(ValueError):
    pass


@dataclass
class OracleReport:
    cfg: ModelConfig
    n: int
    history_count: int = 0
    total_probability: Fraction = Fraction(0)
    tables: dict = field(default_factory=lambda: {k: defaultdict(Fraction) for k in STAT_NAMES})
    joint: dict = field(default_factory=lambda: defaultdict(Fraction))  # (random length, source degree)

    def pmf(self, stat: str) -> dict[int, Fraction]:
        return dict(sorted((k, v) for k, v in self.tables[stat].items() if v))

    def expectation(self, stat: str) -> Fraction:
        return sum((k * v for k, v in self.tables[stat].items()), Fraction(0))

    @property
    def expectations(self) -> dict[str, Fraction]:
        return {s: self.expectation(s) for s in STAT_NAMES}

    def to_dict(self) -> dict:
        return {
            "config": self.cfg.to_dict(),
            "n": self.n,
            "history_count": self.history_count,
            "total_probability": fmt_rational(self.total_probability),
            "pmfs": {
                s: {str(k): fmt_rational(v) for k, v in self.pmf(s).items()} for s in STAT_NAMES
            },
            "joint_random_length_source_degree": [
                {"m": m, "l": l, "prob": fmt_rational(v)}
                for (m, l), v in sorted(self.joint.items())
                if v
            ],
            "expectations": {s: fmt_rational(v) for s, v in self.expectations.items()},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _check_budget(cfg: ModelConfig, n: int) -> None:
    if n < 1:
        raise ValueError("n must be at least 1")
    cap = MAX_N_COLORED if cfg.model.colored else MAX_N_UNCOLORED
    if n > cap:
        raise OracleBudgetError(
            f"n = {n} exceeds the enumeration budget ({cap}) for the {cfg.model.value} model"
        )
    if cfg.model.colored and not isinstance(cfg.p, Fraction):
        raise TypeError("the oracle needs a rational p (e.g. '1/3')")


def _record(report: OracleReport, net: SPNetwork, prob: Fraction) -> None:
    report.history_count += 1
    report.total_probability += prob
    t = report.tables
    d = source_degree(net)
    t["source_degree"][d] += prob
    t["sink_degree"][sink_degree(net)] += prob
    t["leftmost_length"][leftmost_path_length(net)] += prob
    t["path_count"][count_paths(net)] += prob
    for length, w in random_path_length_pmf(net).items():
        t["random_length"][length] += prob * w
        report.joint[(length, d)] += prob * w


def _choices(net: SPNetwork, cfg: ModelConfig):
    """(edge, parallel?, probability) for every way to take the next step."""
    m = net.n_edges
    weights = selection_weights(net, cfg)
    if weights is None:
        weights = [1] * m
    total = sum(weights)
    for j, w in builtins.enumerate(weights, start=1):
        if w == 0:
            continue
        sel = Fraction(w, total)
        if cfg.model.colored:
            yield j, True, sel * cfg.p
            yield j, False, sel * (1 - cfg.p)
        else:
            yield j, len(net.out[net.tail[j]]) < cfg.b, sel


def enumerate(cfg: ModelConfig, n: int) -> OracleReport:  # noqa: A001
    """Walk every history of length n and tabulate all statistics exactly."""
    _check_budget(cfg, n)
    report = OracleReport(cfg, n)

    def walk(net: SPNetwork, prob: Fraction) -> None:
        if net.n_edges == n:
            _record(report, net, prob)
            return
        for j, parallel, w in _choices(net, cfg):
            child = net.copy()
            child.duplicate(j, parallel)
            walk(child, prob * w)

    walk(SPNetwork(), Fraction(1))
    return report


def enumerate_via_trees(cfg: ModelConfig, n: int) -> OracleReport:
    """Same tables, reached through the tree encodings of the histories."""
    from .trees import (
        FLAVOR_OF_MODEL,
        BucketTree,
        Color,
        ColoredIncreasingTree,
        history_probability,
        tree_to_network,
    )

    _check_budget(cfg, n)
    report = OracleReport(cfg, n)

    if cfg.model.colored:
        flavor = FLAVOR_OF_MODEL[cfg.model]

        def walk_c(parents: list[int], colors: list[Color]) -> None:
            k = len(parents) + 2
            if k > n:
                tree = ColoredIncreasingTree(flavor)
                for i, (j, c) in builtins.enumerate(zip(parents, colors), start=2):
                    tree.attach(i, j, c)
                prob = history_probability(tree, cfg)
                if prob:
                    _record(report, tree_to_network(tree), prob)
                return
            for j in range(1, k):
                if flavor.value == "binary-increasing" and parents.count(j) >= 2:
                    continue
                for c in (Color.BLUE, Color.RED):
                    walk_c(parents + [j], colors + [c])

        walk_c([], [])
    else:

        def walk_b(attractors: list[int]) -> None:
            k = len(attractors) + 2
            if k > n:
                tree = BucketTree.from_attractors(cfg.b, attractors)
                _record(report, tree_to_network(tree), history_probability(tree, cfg))
                return
            for j in range(1, k):
                walk_b(attractors + [j])

        walk_b([])
    return report


# --- formula checks ---------------------------------------------------------


@dataclass(frozen=True)
class FormulaCheck:
    name: str
    passed: bool
    worst_deviation: float
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "worst_deviation": self.worst_deviation,
            "detail": self.detail,
        }


def _compare_exact(name: str, got: dict, want: dict) -> FormulaCheck:
    keys = set(got) | set(want)
    diffs = [abs(Fraction(got.get(k, 0)) - Fraction(want.get(k, 0))) for k in keys]
    worst = max(diffs, default=Fraction(0))
    return FormulaCheck(name, worst == 0, float(worst), "exact rational equality")


def _compare_float(name: str, got: float, want: Fraction, rel: float) -> FormulaCheck:
    dev = abs(got - float(want)) / max(1.0, abs(float(want)))
    return FormulaCheck(name, dev <= rel, dev, f"relative tolerance {rel:g}")


def verify_formulas(cfg: ModelConfig, n: int, rel: float = 1e-10) -> list[FormulaCheck]:
    """Compare the oracle tables with every closed form that applies to cfg."""
    from . import exact

    rep = enumerate(cfg, n)
    checks: list[FormulaCheck] = []
    model = cfg.model
    if model is Model.BERNOULLI:
        p = cfg.p
        deg = rep.pmf("source_degree")
        checks.append(_compare_exact("degree-pmf", exact.bernoulli_degree_pmf(n, p).entries, deg))
        checks.append(
            _compare_exact("degree-pmf-dp", exact.bernoulli_degree_pmf_dp(n, p).entries, deg)
        )
        checks.append(
            _compare_exact(
                "leftpath-pmf", exact.bernoulli_leftpath_pmf(n, p).entries, rep.pmf("leftmost_length")
            )
        )
        joint = {k: v for k, v in rep.joint.items() if v}
        checks.append(_compare_exact("joint-pmf", exact.bernoulli_joint_pmf(n, p).entries, joint))
        ep = rep.expectation("path_count")
        checks.append(
            _compare_exact("paths-recurrence", {0: exact.bernoulli_expected_paths(n, p)}, {0: ep})
        )
        checks.append(
            _compare_exact("paths-closed-form", {0: exact.bernoulli_expected_paths_closed(n, p)}, {0: ep})
        )
        for r in (1, 2, 3):
            want = sum((Fraction(math.perm(m, r)) * v for m, v in deg.items()), Fraction(0))
            checks.append(
                _compare_exact(
                    f"factorial-moment-{r}",
                    {0: exact.bernoulli_degree_factorial_moment(n, r, p)},
                    {0: want},
                )
            )
        checks.append(_compare_exact("sink-equals-source", rep.pmf("sink_degree"), deg))
        checks.append(
            _compare_exact("random-equals-leftmost", rep.pmf("random_length"), rep.pmf("leftmost_length"))
        )
    elif model is Model.BINARY:
        checks.append(
            _compare_float(
                "expected-pathlength", exact.binary_expected_pathlength(n), rep.expectation("random_length"), rel
            )
        )
        checks.append(
            _compare_float(
                "expected-sinkdegree", exact.binary_expected_sinkdegree(n), rep.expectation("sink_degree"), rel
            )
        )
        checks.append(
            _compare_exact(
                "expected-paths", {0: exact.binary_expected_paths(n, exact=True)}, {0: rep.expectation("path_count")}
            )
        )
        checks.append(
            _compare_exact("random-equals-leftmost", rep.pmf("random_length"), rep.pmf("leftmost_length"))
        )
    elif model is Model.BARY:
        checks.append(
            _compare_float(
                "expected-pathlength", exact.bary_expected_pathlength(n, cfg.b), rep.expectation("random_length"), rel
            )
        )
    elif model is Model.PREFERENTIAL:
        checks.append(
            _compare_exact(
                "expected-sourcedegree",
                {0: exact.preferential_expected_sourcedegree(n, cfg.p)},
                {0: rep.expectation("source_degree")},
            )
        )
    elif model is Model.SATURATION:
        checks.append(
            _compare_exact(
                "expected-sourcedegree",
                {0: exact.saturation_expected_sourcedegree(n, cfg.p)},
                {0: rep.expectation("source_degree")},
            )
        )
    checks.append(
        FormulaCheck(
            "probability-conservation",
            rep.total_probability == 1,
            float(abs(rep.total_probability - 1)),
            "sum of history probabilities",
        )
    )
    return checks
