"""Test trees over finite probability spaces and the Monte Carlo audits of
the weak laws and the thicket uniform-convergence bound.

Sampling is counter-based: the label of a tree node is a pure function of
(seed, node path) through a splitmix64 chain, so lazily materialized trees
are identical regardless of traversal order or worker count.  Estimates and
probabilities are exact rationals; only the exp(.) bound comparison uses
floats, with a 1e-12 guard.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import InputError, ResourceCapError
from .setsystem import SetSystem
from .dims import thicket_dimension, thicket_shatter, NEG_INF
from math import comb

__all__ = [
    "ProbSpace",
    "TestTree",
    "ExperimentReport",
    "sample_test_tree",
    "characteristic_path",
    "test_estimate",
    "exact_expectation",
    "uniform_deviation",
    "run_weak_law",
    "run_vc_theorem",
]

_MASK = (1 << 64) - 1
_SCALE = 1 << 64
FLOAT_GUARD = 1e-12
DEFAULT_EXPECTATION_CAP = 10 ** 6


def splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def _splitmix64_np(x):
    x = (x + np.uint64(0x9E3779B97F4A7C15))
    x ^= x >> np.uint64(30)
    x *= np.uint64(0xBF58476D1CE4E5B9)
    x ^= x >> np.uint64(27)
    x *= np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


@dataclass(frozen=True)
class ProbSpace:
    """Finite base set [N] with exact rational weights summing to 1."""

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(Fraction(w) for w in self.weights)
        if any(w < 0 for w in ws):
            raise InputError("weights must be nonnegative")
        if sum(ws) != 1:
            raise InputError("weights must sum to exactly 1")
        object.__setattr__(self, "weights", ws)

    @property
    def size(self):
        return len(self.weights)

    @classmethod
    def uniform(cls, size):
        return cls(tuple(Fraction(1, size) for _ in range(size)))

    def mass(self, members):
        mask = _as_mask(members, self.size)
        return sum((w for i, w in enumerate(self.weights) if mask >> i & 1),
                   Fraction(0))

    def sampling_thresholds(self):
        """T_i = floor(cumulative_i * 2^64); the draw with 64-bit value u
        lands on point bisect_right(T, u)."""
        out = []
        cum = Fraction(0)
        for w in self.weights[:-1]:
            cum += w
            out.append(min((cum.numerator * _SCALE) // cum.denominator,
                           _SCALE - 1))
        return out

    def to_json_dict(self):
        return {"points": self.size,
                "weights": [f"{w.numerator}/{w.denominator}" for w in self.weights]}

    @classmethod
    def from_json_dict(cls, data):
        try:
            n = int(data["points"])
            ws = tuple(Fraction(w) for w in data["weights"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed probability space: {exc}") from exc
        if len(ws) != n:
            raise InputError("weight count does not match point count")
        return cls(ws)


def _as_mask(members, size):
    if isinstance(members, int):
        if not 0 <= members < 1 << size:
            raise InputError("membership mask out of range")
        return members
    mask = 0
    for x in members:
        if not 0 <= x < size:
            raise InputError(f"point {x} out of range")
        mask |= 1 << x
    return mask


class TestTree:
    """Lazily materialized sampling tree of the given height.

    Node states chain as state(path + b) = splitmix64(state(path) ^ (b+1))
    from state('') = splitmix64(seed); the node's label is the point picked
    by its state against the space's cumulative thresholds.
    """

    def __init__(self, space: ProbSpace, height, seed):
        if height < 1:
            raise InputError("height must be >= 1")
        self.space = space
        self.height = height
        self.seed = seed & _MASK
        self._thresholds = space.sampling_thresholds()
        self._nodes = {(): splitmix64(self.seed)}

    def _state(self, path):
        state = self._nodes.get(path)
        if state is None:
            state = splitmix64(self._state(path[:-1]) ^ (path[-1] + 1))
            self._nodes[path] = state
        return state

    def label(self, path):
        """Point index at the node; populates exactly the path's ancestors."""
        if len(path) >= self.height or any(b not in (0, 1) for b in path):
            raise InputError(f"bad node {path!r} for height {self.height}")
        return bisect_right(self._thresholds, self._state(tuple(path)))

    @property
    def populated_nodes(self):
        return len(self._nodes)


def sample_test_tree(space: ProbSpace, height, seed) -> TestTree:
    return TestTree(space, height, seed)


def characteristic_path(tree: TestTree, members):
    """The unique branch whose bits equal membership of the visited labels."""
    mask = _as_mask(members, tree.space.size)
    path = []
    for _ in range(tree.height):
        x = tree.label(tuple(path))
        path.append((mask >> x) & 1)
    return tuple(path)


def test_estimate(tree: TestTree, members) -> Fraction:
    """Fraction of positive queries along the characteristic path."""
    path = characteristic_path(tree, members)
    return Fraction(sum(path), tree.height)


def exact_expectation(space: ProbSpace, members, height, cap=None):
    """Exact expectation of the test estimate by enumerating the labels of
    the path-relevant nodes; equals the measure of the queried set."""
    limit = DEFAULT_EXPECTATION_CAP if cap is None else cap
    if space.size ** height > limit:
        raise ResourceCapError(
            f"{space.size}^{height} label patterns exceed cap {limit}", cap=limit)
    mask = _as_mask(members, space.size)
    total = Fraction(0)
    for labels in product(range(space.size), repeat=height):
        weight = Fraction(1)
        ones = 0
        for x in labels:
            weight *= space.weights[x]
            ones += (mask >> x) & 1
        total += weight * Fraction(ones, height)
    return total


def uniform_deviation(tree: TestTree, system: SetSystem, space: ProbSpace):
    """sup over the family of |test estimate - measure|, exact."""
    if system.universe_size != space.size:
        raise InputError("family universe must equal the space's points")
    best = Fraction(0)
    for mask in system.sets:
        dev = abs(test_estimate(tree, mask) - space.mass(mask))
        if dev > best:
            best = dev
    return best


@dataclass
class ExperimentReport:
    kind: str
    config: dict
    trials: int
    exceedances: int
    empirical: Fraction
    bound: float
    slack: float
    passed: bool
    notes: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)

    def to_json_dict(self):
        return {
            "kind": self.kind,
            "config": self.config,
            "trials": self.trials,
            "exceedances": self.exceedances,
            "empirical": f"{self.empirical.numerator}/{self.empirical.denominator}",
            "bound": self.bound,
            "slack": self.slack,
            "pass": self.passed,
            "notes": self.notes,
        }

    def csv_rows(self):
        header = "trial,n,epsilon,deviation,exceeded"
        return [header] + [
            "{trial},{n},{epsilon},{deviation},{exceeded}".format(**row)
            for row in self.rows
        ]


def trial_seed(master_seed, trial_index):
    return splitmix64(splitmix64(master_seed & _MASK) ^ (trial_index + 1))


def _simulate_ones(space: ProbSpace, masks, height, trials, seed):
    """Vectorized per-trial, per-set counts of 1s along characteristic
    paths; bit-identical to walking scalar TestTree objects."""
    m = len(masks)
    thresholds = np.array(space.sampling_thresholds(), dtype=np.uint64)
    memb = np.zeros((m, space.size), dtype=np.uint64)
    for i, mask in enumerate(masks):
        for x in range(space.size):
            memb[i, x] = (mask >> x) & 1
    seeds = np.array([trial_seed(seed, t) for t in range(trials)], dtype=np.uint64)
    states = np.repeat(_splitmix64_np(seeds)[:, None], m, axis=1)
    ones = np.zeros((trials, m), dtype=np.int64)
    rows = np.arange(m)[None, :]
    for _ in range(height):
        labels = np.searchsorted(thresholds, states, side="right")
        bits = memb[rows, labels]
        ones += bits.astype(np.int64)
        states = _splitmix64_np(states ^ (bits + np.uint64(1)))
    return ones


def _binomial_slack(exceedances, trials):
    p = exceedances / trials
    return 3.0 * math.sqrt(p * (1.0 - p) / trials)


def run_weak_law(space: ProbSpace, members, height, epsilon, trials, seed,
                 keep_rows=True) -> ExperimentReport:
    """Monte Carlo check of the 1/(4 n eps^2) tail bound for a single set."""
    if trials < 1:
        raise InputError("trials must be >= 1")
    eps = Fraction(epsilon)
    mask = _as_mask(members, space.size)
    mu = space.mass(mask)
    ones = _simulate_ones(space, [mask], height, trials, seed)[:, 0]
    exceed = 0
    rows = []
    for t in range(trials):
        dev = abs(Fraction(int(ones[t]), height) - mu)
        hit = dev >= eps
        exceed += hit
        if keep_rows:
            rows.append({"trial": t, "n": height, "epsilon": str(eps),
                         "deviation": f"{dev.numerator}/{dev.denominator}",
                         "exceeded": int(hit)})
    bound = Fraction(1, 4 * height) / (eps * eps)
    slack = _binomial_slack(exceed, trials)
    empirical = Fraction(exceed, trials)
    passed = float(empirical) <= float(bound) + slack + FLOAT_GUARD
    return ExperimentReport(
        kind="weak_law",
        config={"n": height, "epsilon": str(eps), "trials": trials,
                "seed": seed, "mu": f"{mu.numerator}/{mu.denominator}"},
        trials=trials, exceedances=exceed, empirical=empirical,
        bound=float(bound), slack=slack, passed=passed,
        notes={"bound_exact": f"{bound.numerator}/{bound.denominator}"},
        rows=rows)


def _thicket_shatter_estimate(system: SetSystem, height):
    """Exact rho when small enough, else the Sauer-style polynomial bound."""
    if system.universe_size <= 12 and height <= 12:
        return thicket_shatter(system, height), "exact"
    k = thicket_dimension(system)
    if k == NEG_INF:
        return 0, "bounded"
    return sum(comb(height, i) for i in range(int(k) + 1)), "bounded"


def run_vc_theorem(space: ProbSpace, system: SetSystem, height, epsilon,
                   trials, seed, keep_rows=True) -> ExperimentReport:
    """Monte Carlo audit of the 8 rho(n) exp(-n eps^2 / 32) uniform bound."""
    if trials < 1:
        raise InputError("trials must be >= 1")
    if system.universe_size != space.size:
        raise InputError("family universe must equal the space's points")
    eps = Fraction(epsilon)
    masses = [space.mass(m) for m in system.sets]
    ones = _simulate_ones(space, list(system.sets), height, trials, seed)
    exceed = 0
    rows = []
    for t in range(trials):
        dev = Fraction(0)
        for i in range(len(system.sets)):
            d = abs(Fraction(int(ones[t, i]), height) - masses[i])
            if d > dev:
                dev = d
        hit = dev > eps
        exceed += hit
        if keep_rows:
            rows.append({"trial": t, "n": height, "epsilon": str(eps),
                         "deviation": f"{dev.numerator}/{dev.denominator}",
                         "exceeded": int(hit)})
    rho, rho_source = _thicket_shatter_estimate(system, height)
    bound = min(1.0, 8.0 * rho * math.exp(-height * float(eps) ** 2 / 32.0))
    slack = _binomial_slack(exceed, trials)
    empirical = Fraction(exceed, trials)
    passed = float(empirical) <= bound + slack + FLOAT_GUARD
    return ExperimentReport(
        kind="vc_theorem",
        config={"n": height, "epsilon": str(eps), "trials": trials,
                "seed": seed, "sets": len(system.sets)},
        trials=trials, exceedances=exceed, empirical=empirical,
        bound=bound, slack=slack, passed=passed,
        notes={"rho": rho, "rho_source": rho_source,
               "bound_vacuous": bound >= 1.0},
        rows=rows)
