"""Graphs, type trees, tree rank, and clique/independent-set extraction.

A type tree is a prefix-closed labeling of binary strings by vertices where
the child direction records adjacency to the parent (condition 1) and an
ancestor's adjacency is constant across its strict descendants through a
child (condition 2).  Heights count levels: a lone root has height 1.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import factorial

from .errors import InputError, VerificationError
from .setsystem import SetSystem
from .dims import thicket_dimension, NEG_INF

__all__ = [
    "Graph",
    "TypeTree",
    "build_type_tree",
    "validate_type_tree",
    "tree_rank",
    "extract_clique_or_independent",
    "check_height_bound",
    "random_graph",
]

DEFAULT_RANK_CAP = 18


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset[frozenset[int]]

    @classmethod
    def from_edge_list(cls, vertex_count, edge_list):
        edges = set()
        for u, v in edge_list:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise InputError(f"edge ({u},{v}) out of range")
            if u == v:
                raise InputError(f"self-loop at {u}")
            edges.add(frozenset((u, v)))
        return cls(vertex_count, frozenset(edges))

    def adjacent(self, u, v):
        return frozenset((u, v)) in self.edges

    def neighbor_mask(self, v):
        m = 0
        for u in range(self.vertex_count):
            if u != v and self.adjacent(u, v):
                m |= 1 << u
        return m

    def neighborhood_system(self) -> SetSystem:
        """Set system {N(v) : v in V} over the vertex universe."""
        return SetSystem(self.vertex_count,
                         tuple({self.neighbor_mask(v)
                                for v in range(self.vertex_count)}),
                         name="neighborhoods")

    def to_json_dict(self):
        return {"vertices": self.vertex_count,
                "edges": sorted(sorted(e) for e in self.edges)}

    @classmethod
    def from_json_dict(cls, data):
        try:
            return cls.from_edge_list(int(data["vertices"]), data["edges"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed graph object: {exc}") from exc


def random_graph(vertex_count, edge_probability, seed):
    rng = random.Random(seed)
    edges = [(u, v) for u, v in itertools.combinations(range(vertex_count), 2)
             if rng.random() < edge_probability]
    return Graph.from_edge_list(vertex_count, edges)


@dataclass(frozen=True)
class TypeTree:
    """Labels: prefix-closed map from binary strings ('' is the root) to
    vertex ids, each vertex used exactly once."""

    labels: dict[str, int]

    @property
    def height(self):
        return max(len(key) for key in self.labels) + 1 if self.labels else 0

    def to_json_dict(self):
        return dict(self.labels)

    @classmethod
    def from_json_dict(cls, data):
        try:
            return cls({str(key): int(v) for key, v in data.items()})
        except (TypeError, ValueError) as exc:
            raise InputError(f"malformed type tree: {exc}") from exc


def build_type_tree(graph: Graph, order=None) -> TypeTree:
    """Insert vertices BST-style: descend right on adjacency, left otherwise,
    occupying the first empty slot.  Both type-tree conditions hold by
    construction; the result is revalidated anyway."""
    if order is None:
        order = range(graph.vertex_count)
    order = list(order)
    if sorted(order) != list(range(graph.vertex_count)):
        raise InputError("order must be a permutation of the vertices")
    labels = {}
    for v in order:
        key = ""
        while key in labels:
            key += "1" if graph.adjacent(v, labels[key]) else "0"
        labels[key] = v
    tree = TypeTree(labels)
    ok, violation = validate_type_tree(graph, tree)
    if not ok:
        raise VerificationError(f"built tree failed validation: {violation}")
    return tree


def validate_type_tree(graph: Graph, tree: TypeTree):
    """(True, None) or (False, description of the first violation)."""
    labels = tree.labels
    if graph.vertex_count != len(labels):
        return False, "labeling is not a bijection with the vertex set"
    if sorted(labels.values()) != list(range(graph.vertex_count)):
        return False, "labeling is not a bijection with the vertex set"
    for key in labels:
        if set(key) - {"0", "1"}:
            return False, f"bad node key {key!r}"
        if key and key[:-1] not in labels:
            return False, f"index set not prefix-closed at {key!r}"
    for key, v in labels.items():
        parent = labels.get(key[:-1]) if key else None
        if parent is not None:
            adjacent = graph.adjacent(v, parent)
            if key[-1] == "1" and not adjacent:
                return False, f"condition 1: {key!r} marked adjacent but is not"
            if key[-1] == "0" and adjacent:
                return False, f"condition 1: {key!r} marked nonadjacent but is adjacent"
    keys = sorted(labels, key=len)
    for eta, eta2 in itertools.permutations(keys, 2):
        if not (len(eta) < len(eta2) and eta2.startswith(eta)):
            continue
        # condition 2 via the parent chain: adjacency of a_eta to any strict
        # descendant equals its adjacency to the child it passes through.
        mid = eta2[: len(eta) + 1]
        if mid == eta2:
            continue
        if graph.adjacent(labels[eta], labels[mid]) != \
                graph.adjacent(labels[eta], labels[eta2]):
            return False, (f"condition 2: triple ({eta!r}, {mid!r}, {eta2!r})")
    return True, None


def tree_rank(graph: Graph, cap=None):
    """Largest t admitting a full binary type tree of height t on some
    vertex subset.  Exact up to the cap (default 18 vertices); above it,
    returns (greedy lower bound, upper bound) flagged inexact."""
    n = graph.vertex_count
    if n == 0:
        raise InputError("tree rank needs at least one vertex")
    limit = DEFAULT_RANK_CAP if cap is None else cap
    if n > limit:
        return _tree_rank_bounds(graph)
    neighbor = [graph.neighbor_mask(v) for v in range(n)]
    full = (1 << n) - 1
    memo = {}

    def feasible(pool, t):
        if t <= 1:
            return pool != 0
        if bin(pool).count("1") < (1 << t) - 1:
            return False
        key = (pool, t)
        cached = memo.get(key)
        if cached is not None:
            return cached
        out = False
        rest = pool
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            others = pool & ~(1 << v)
            ones = others & neighbor[v]
            zeros = others & ~neighbor[v]
            if feasible(zeros, t - 1) and feasible(ones, t - 1):
                out = True
                break
        memo[key] = out
        return out

    t = 1
    while feasible(full, t + 1):
        t += 1
    return t


def _greedy_rank_lower_bound(graph: Graph):
    """Height of the largest full binary subtree of a built type tree; any
    full type tree of height t inside it witnesses tree rank >= t."""
    best = 1
    for seed_vertex in range(min(graph.vertex_count, 4)):
        order = ([seed_vertex]
                 + [v for v in range(graph.vertex_count) if v != seed_vertex])
        labels = build_type_tree(graph, order).labels

        def full_height(key):
            if key not in labels:
                return 0
            return 1 + min(full_height(key + "0"), full_height(key + "1"))

        best = max(best, full_height(""))
    return best


def _tree_rank_bounds(graph: Graph):
    lower = _greedy_rank_lower_bound(graph)
    k = thicket_dimension(graph.neighborhood_system())
    upper = 1 if k == NEG_INF else int(k) + 1
    # a full tree of height t needs 2^t - 1 vertices
    upper = min(upper, (graph.vertex_count + 1).bit_length() - 1)
    return {"exact": False, "lower": lower, "upper": max(lower, upper)}


def extract_clique_or_independent(tree: TypeTree):
    """From a deepest branch: right-turn ancestors plus the leaf form a
    clique, left-turn ancestors plus the leaf an independent set."""
    if not tree.labels:
        raise InputError("empty type tree")
    leaf = max(tree.labels, key=len)
    clique = {tree.labels[leaf]}
    independent = {tree.labels[leaf]}
    for depth, turn in enumerate(leaf):
        v = tree.labels[leaf[:depth]]
        (clique if turn == "1" else independent).add(v)
    return clique, independent


def check_height_bound(graph: Graph, tree: TypeTree, cap=None):
    """Exact check of (h-1)^t >= n (t-2)! for t >= 2, h >= 2t."""
    rank = tree_rank(graph, cap=cap)
    h = tree.height
    n = graph.vertex_count
    if isinstance(rank, dict):
        return {"applicable": False, "reason": "tree rank inexact above cap",
                "rank_bounds": rank, "height": h}
    if rank < 2 or h < 2 * rank:
        return {"applicable": False,
                "reason": f"hypotheses not met (t={rank}, h={h})",
                "tree_rank": rank, "height": h}
    lhs = (h - 1) ** rank
    rhs = n * factorial(rank - 2)
    return {"applicable": True, "tree_rank": rank, "height": h,
            "n": n, "lhs": lhs, "rhs": rhs, "pass": lhs >= rhs}
