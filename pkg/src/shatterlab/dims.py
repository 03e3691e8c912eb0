"""Dimensions and shatter functions of finite set systems.

Implements VC dimension, thicket dimension, op_s-rank and their shatter
functions, all by exact recursion over canonically sorted families, plus an
auditor that machine-checks the Sauer-Shelah style bounds relating them.

The empty family has rank ``NEG_INF`` (serialized as the string "-inf").
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb

from .errors import InputError, ResourceCapError
from .setsystem import SetSystem, child_masks, project

__all__ = [
    "NEG_INF",
    "ElementTree",
    "BoundAuditReport",
    "shatters",
    "vc_dimension",
    "vc_shatter_function",
    "thicket_dimension",
    "thicket_shatter",
    "op_rank",
    "op_shatter",
    "count_children_dropping",
    "audit_bounds",
    "random_element_tree",
]

NEG_INF = float("-inf")

DEFAULT_VC_CAP = 20
DEFAULT_OP_CAP = 12


def rank_to_str(value):
    return "-inf" if value == NEG_INF else str(int(value))


def rank_from_str(text):
    return NEG_INF if text == "-inf" else int(text)


# ---------------------------------------------------------------------------
# element trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ElementTree:
    """Complete 2^s-ary tree of height n; each internal node carries an
    s-tuple of universe elements.  Nodes are tuples over [2^s]."""

    arity_exponent: int
    height: int
    labels: dict[tuple[int, ...], tuple[int, ...]]

    def __post_init__(self):
        s, n = self.arity_exponent, self.height
        if s < 1 or n < 0:
            raise InputError("need arity_exponent >= 1 and height >= 0")
        arity = 1 << s
        expected = sum(arity ** d for d in range(n))
        if len(self.labels) != expected:
            raise InputError(f"expected {expected} labeled nodes, got {len(self.labels)}")
        for node, lab in self.labels.items():
            if len(node) >= n or any(not 0 <= v < arity for v in node):
                raise InputError(f"bad node {node!r}")
            if len(lab) != s:
                raise InputError(f"label {lab!r} at {node!r} is not an {s}-tuple")

    @property
    def arity(self):
        return 1 << self.arity_exponent

    def leaves(self):
        return itertools.product(range(self.arity), repeat=self.height)

    def path_requirements(self, leaf):
        """(must_contain, must_avoid) masks for the leaf; None if some
        element is required both in and out (leaf unlabelable)."""
        req1 = req0 = 0
        for depth, symbol in enumerate(leaf):
            lab = self.labels[tuple(leaf[:depth])]
            for i, x in enumerate(lab):
                if symbol >> i & 1:
                    req1 |= 1 << x
                else:
                    req0 |= 1 << x
        if req1 & req0:
            return None
        return req1, req0

    def properly_labelable(self, leaf, sets):
        req = self.path_requirements(leaf)
        if req is None:
            return False
        req1, req0 = req
        return any(m & req1 == req1 and m & req0 == 0 for m in sets)

    def count_properly_labeled(self, system: SetSystem):
        return sum(1 for leaf in self.leaves()
                   if self.properly_labelable(leaf, system.sets))


def random_element_tree(universe_size, arity_exponent, height, seed):
    """Seeded complete element tree with uniformly random labels."""
    if universe_size < 1:
        raise InputError("need a nonempty universe")
    rng = random.Random(seed)
    arity = 1 << arity_exponent
    labels = {}
    for depth in range(height):
        for node in itertools.product(range(arity), repeat=depth):
            labels[node] = tuple(rng.randrange(universe_size)
                                 for _ in range(arity_exponent))
    return ElementTree(arity_exponent, height, labels)


# ---------------------------------------------------------------------------
# VC dimension and shatter function
# ---------------------------------------------------------------------------

def shatters(system: SetSystem, targets) -> bool:
    ys = sorted(set(targets))
    return len(project(system, ys).sets) == 1 << len(ys)


def _check_vc_cap(system, cap):
    limit = DEFAULT_VC_CAP if cap is None else cap
    if system.universe_size > limit:
        raise ResourceCapError(
            f"universe {system.universe_size} exceeds VC enumeration cap {limit}",
            cap=limit)


def vc_dimension(system: SetSystem, cap=None):
    """Largest size of a shattered subset; NEG_INF for the empty family."""
    if not system.sets:
        return NEG_INF
    _check_vc_cap(system, cap)
    n = system.universe_size
    best = 0
    for k in range(1, n + 1):
        if len(system.sets) < 1 << k:
            break
        if any(_shatters_masks(system.sets, combo)
               for combo in itertools.combinations(range(n), k)):
            best = k
        else:
            break
    return best


def _shatters_masks(sets, combo):
    want = 1 << len(combo)
    seen = set()
    for m in sets:
        seen.add(sum(((m >> y) & 1) << j for j, y in enumerate(combo)))
        if len(seen) == want:
            return True
    return False


def vc_shatter_function(system: SetSystem, size, cap=None):
    """pi_F(size): the largest trace count over subsets of the given size."""
    if not 0 <= size <= system.universe_size:
        raise InputError(f"size {size} out of range for universe [{system.universe_size}]")
    if not system.sets:
        return 0
    _check_vc_cap(system, cap)
    best = 0
    full = 1 << size
    for combo in itertools.combinations(range(system.universe_size), size):
        traces = set()
        for m in system.sets:
            traces.add(sum(((m >> y) & 1) << j for j, y in enumerate(combo)))
        best = max(best, len(traces))
        if best == full:
            break
    return best


# ---------------------------------------------------------------------------
# thicket dimension and shatter function
# ---------------------------------------------------------------------------

def thicket_dimension(system: SetSystem):
    """Largest height of a binary element tree with all leaves properly
    labeled; found by deepening a memoized feasibility test (dim >= t
    requires at least 2^t sets, which prunes the search hard)."""
    if not system.sets:
        return NEG_INF
    memo = {}
    t = 0
    while _thicket_dim_at_least(system.sets, system.universe_size, t + 1, memo):
        t += 1
    return t


def _thicket_dim_at_least(sets, n, t, memo):
    if t <= 0:
        return bool(sets)
    if len(sets) < 1 << t:
        return False
    key = (sets, t)
    cached = memo.get(key)
    if cached is not None:
        return cached
    out = False
    for x in range(n):
        bit = 1 << x
        f1 = tuple(m for m in sets if m & bit)
        if len(f1) < 1 << (t - 1) or len(sets) - len(f1) < 1 << (t - 1):
            continue
        f0 = tuple(m for m in sets if not m & bit)
        if _thicket_dim_at_least(f0, n, t - 1, memo) and \
                _thicket_dim_at_least(f1, n, t - 1, memo):
            out = True
            break
    memo[key] = out
    return out


def thicket_shatter(system: SetSystem, height):
    """rho_F(height): maximum number of properly labeled leaves."""
    if height < 0:
        raise InputError("height must be non-negative")
    return _thicket_shatter(system.sets, system.universe_size, height, {})


def _thicket_shatter(sets, n, height, memo):
    if not sets:
        return 0
    if height == 0 or len(sets) == 1:
        return 1
    key = (sets, height)
    cached = memo.get(key)
    if cached is not None:
        return cached
    cap = min(1 << height, len(sets))
    best = 1
    for x in range(n):
        bit = 1 << x
        f1 = tuple(m for m in sets if m & bit)
        f0 = tuple(m for m in sets if not m & bit)
        total = (_thicket_shatter(f0, n, height - 1, memo)
                 + _thicket_shatter(f1, n, height - 1, memo))
        if total > best:
            best = total
            if best == cap:
                break
    memo[key] = best
    return best


# ---------------------------------------------------------------------------
# op_s-rank and op_s shatter function
# ---------------------------------------------------------------------------

def _check_op_cap(system, cap):
    limit = DEFAULT_OP_CAP if cap is None else cap
    if system.universe_size > limit:
        raise ResourceCapError(
            f"universe {system.universe_size} exceeds op-rank cap {limit}",
            cap=limit)


def op_rank(system: SetSystem, s, cap=None):
    """Largest height of a 2^s-ary element tree with all leaves properly
    labeled.  NEG_INF for the empty family; 0 for nonempty systems whose
    universe is smaller than s."""
    if s < 1:
        raise InputError("s must be >= 1")
    if not system.sets:
        return NEG_INF
    _check_op_cap(system, cap)
    memo = {}
    k = 0
    while _op_rank_at_least(system.sets, system.universe_size, s, k + 1, memo):
        k += 1
    return k


def _op_rank_at_least(sets, n, s, t, memo):
    if not sets:
        return False
    if t <= 0:
        return True
    if len(sets) < 1 << (s * t):
        return False
    key = (sets, t)
    cached = memo.get(key)
    if cached is not None:
        return cached
    out = False
    # Distinct tuples only: a repeated element forces an empty child, and
    # the min over children is invariant under permuting the tuple.
    for xs in itertools.combinations(range(n), s):
        children = [child_masks(sets, xs, sigma)
                    for sigma in itertools.product((0, 1), repeat=s)]
        if all(children) and all(_op_rank_at_least(ch, n, s, t - 1, memo)
                                 for ch in children):
            out = True
            break
    memo[key] = out
    return out


def op_shatter(system: SetSystem, s, height, cap=None):
    """psi_F^s(height): maximum properly labeled leaves of a 2^s-ary tree.

    The tuple search permits repeated elements so that universes smaller
    than s are still covered."""
    if s < 1:
        raise InputError("s must be >= 1")
    if height < 0:
        raise InputError("height must be non-negative")
    if not system.sets:
        return 0
    _check_op_cap(system, cap)
    return _op_shatter(system.sets, system.universe_size, s, height, {})


def _op_shatter(sets, n, s, height, memo):
    if not sets:
        return 0
    if height == 0 or len(sets) == 1:
        return 1
    key = (sets, height)
    cached = memo.get(key)
    if cached is not None:
        return cached
    cap = min(1 << (s * height), len(sets))
    best = 1
    sigmas = list(itertools.product((0, 1), repeat=s))
    for xs in itertools.combinations_with_replacement(range(n), s):
        total = 0
        for sigma in sigmas:
            total += _op_shatter(child_masks(sets, xs, sigma), n, s,
                                 height - 1, memo)
        if total > best:
            best = total
            if best == cap:
                break
    memo[key] = best
    return best


def count_children_dropping(system: SetSystem, xs, r, l, cap=None):
    """Number of children F_sigma on tuple ``xs`` whose op_r-rank drops by
    at least ``l`` below op_r-rank(F)."""
    if not system.sets:
        raise InputError("requires a nonempty family (finite op-rank)")
    if r < 1 or l < 1:
        raise InputError("need r >= 1 and l >= 1")
    a = op_rank(system, r, cap=cap)
    s = len(xs)
    count = 0
    for sigma in itertools.product((0, 1), repeat=s):
        kid = SetSystem(system.universe_size, child_masks(system.sets, xs, sigma))
        if op_rank(kid, r, cap=cap) <= a - l:
            count += 1
    return count


# ---------------------------------------------------------------------------
# bound auditor
# ---------------------------------------------------------------------------

@dataclass
class BoundAuditReport:
    rows: list[dict] = field(default_factory=list)

    def add(self, bound, params, lhs, rhs, passed):
        self.rows.append({"bound": bound, "params": params,
                          "lhs": lhs, "rhs": rhs, "pass": bool(passed)})

    @property
    def all_pass(self):
        return all(row["pass"] for row in self.rows)

    def failures(self):
        return [row for row in self.rows if not row["pass"]]

    def to_json_list(self):
        return list(self.rows)


def _sauer_sum(n, k):
    if k == NEG_INF:
        return 0
    return sum(comb(n, i) for i in range(int(k) + 1))


def audit_bounds(system: SetSystem, s, r, n, cap=None) -> BoundAuditReport:
    """Evaluate every shatter-function bound at the given parameters.

    Bounds: (a) VC Sauer-Shelah, (b) thicket Sauer-Shelah, (c) op_s shatter
    vs op_s-rank, (d) rank-0 power bound, (e) rank comparison across
    arities, (f) rank monotonicity under subfamilies, (g) the two-parameter
    recurrence bound with a0 = sum_{i<r} C(s,i), a1 = 2^s - a0.
    """
    if s < 1 or r < 1 or n < 0:
        raise InputError("need s >= 1, r >= 1, n >= 0")
    report = BoundAuditReport()
    empty = not system.sets

    # (a) pi_F(n) <= sum_{i<=d} C(n,i); pi is only defined up to the
    # universe size, so evaluate both sides at the clamped value.
    na = min(n, system.universe_size)
    d = NEG_INF if empty else vc_dimension(system, cap=cap)
    lhs = 0 if empty else vc_shatter_function(system, na, cap=cap)
    report.add("vc_sauer_shelah", {"n": na, "dim": rank_to_str(d)},
               lhs, _sauer_sum(na, d), lhs <= _sauer_sum(na, d))

    # (b) rho_F(n) <= sum_{i<=k} C(n,i)
    k = thicket_dimension(system)
    lhs = thicket_shatter(system, n)
    report.add("thicket_sauer_shelah", {"n": n, "dim": rank_to_str(k)},
               lhs, _sauer_sum(n, k), lhs <= _sauer_sum(n, k))

    # (c) psi_F^s(n) <= sum_{i<=k} (2^s-1)^{n-i} C(n,i)
    ks = op_rank(system, s, cap=cap)
    lhs = op_shatter(system, s, n, cap=cap)
    if ks == NEG_INF:
        rhs = 0
    else:
        rhs = sum((((1 << s) - 1) ** (n - i)) * comb(n, i)
                  for i in range(int(ks) + 1))
    report.add("op_shatter_vs_rank", {"n": n, "s": s, "rank": rank_to_str(ks)},
               lhs, rhs, lhs <= rhs)

    # (d) op_r-rank 0 implies psi_F^s(n) <= (sum_{i<r} C(s,i))^n
    kr = NEG_INF if empty else op_rank(system, r, cap=cap)
    if kr == 0:
        base = sum(comb(s, i) for i in range(r))
        lhs = op_shatter(system, s, n, cap=cap)
        report.add("rank_zero_power", {"n": n, "s": s, "r": r},
                   lhs, base ** n, lhs <= base ** n)
    else:
        report.add("rank_zero_power", {"n": n, "s": s, "r": r,
                                       "note": "hypothesis op_r-rank = 0 not met"},
                   0, 0, True)

    # (e) opR_{s1} >= floor(s2/s1) * opR_{s2} for s1 < s2 <= s
    for s1 in range(1, s):
        for s2 in range(s1 + 1, s + 1):
            r1 = op_rank(system, s1, cap=cap)
            r2 = op_rank(system, s2, cap=cap)
            rhs = NEG_INF if r2 == NEG_INF else (s2 // s1) * r2
            report.add("rank_arity_comparison", {"s1": s1, "s2": s2},
                       rank_to_str(r1), rank_to_str(rhs), r1 >= rhs)

    # (f) monotonicity under subfamilies
    for label, sub in _subfamily_samples(system):
        rsub = op_rank(sub, s, cap=cap)
        rfull = op_rank(system, s, cap=cap)
        report.add("rank_monotone_subfamily", {"s": s, "subfamily": label},
                   rank_to_str(rsub), rank_to_str(rfull), rsub <= rfull)

    # (g) psi_F^s(n) <= sum_{i<=b} C(n,i) a0^{n-i} a1^i with b = op_r-rank
    a0 = sum(comb(s, i) for i in range(r))
    a1 = (1 << s) - a0
    b = kr
    lhs = op_shatter(system, s, n, cap=cap)
    if b == NEG_INF:
        rhs = 0
    else:
        rhs = sum(comb(n, i) * (a0 ** (n - i)) * (a1 ** i)
                  for i in range(int(b) + 1))
    report.add("two_parameter_recurrence",
               {"n": n, "s": s, "r": r, "b": rank_to_str(b), "a0": a0, "a1": a1},
               lhs, rhs, lhs <= rhs)
    return report


def _subfamily_samples(system):
    sets = system.sets
    if len(sets) <= 1:
        return []
    half = SetSystem(system.universe_size, sets[: (len(sets) + 1) // 2])
    evens = SetSystem(system.universe_size, sets[::2])
    trimmed = SetSystem(system.universe_size, sets[:-1])
    return [("first_half", half), ("even_indexed", evens), ("drop_last", trimmed)]
