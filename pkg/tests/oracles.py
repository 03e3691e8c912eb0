"""Independent brute-force oracles used to cross-check the fast recursions.

Everything here favors obviousness over speed: dimensions and shatter
functions are computed by enumerating every complete element tree, and the
hereditary check by enumerating every candidate context assignment.
"""

import itertools

from shatterlab.banseq import assemble
from shatterlab.dims import ElementTree, NEG_INF


def _all_trees(universe_size, arity_exponent, height):
    """Every complete 2^s-ary element tree of the given height, with labels
    drawn from all s-tuples (repeats included)."""
    arity = 1 << arity_exponent
    nodes = [node for depth in range(height)
             for node in itertools.product(range(arity), repeat=depth)]
    tuples = list(itertools.product(range(universe_size), repeat=arity_exponent))
    for assignment in itertools.product(tuples, repeat=len(nodes)):
        yield ElementTree(arity_exponent, height,
                          dict(zip(nodes, assignment)))


def brute_rank(system, arity_exponent, max_height):
    """Largest height (up to max_height) of a fully properly labeled tree."""
    if not system.sets:
        return NEG_INF
    best = 0
    for height in range(1, max_height + 1):
        full = (1 << arity_exponent) ** height
        found = any(tree.count_properly_labeled(system) == full
                    for tree in _all_trees(system.universe_size,
                                           arity_exponent, height))
        if not found:
            break
        best = height
    return best


def brute_shatter(system, arity_exponent, height):
    """Maximum properly labeled leaf count over every tree of the height."""
    if not system.sets:
        return 0
    if height == 0:
        return 1
    return max(tree.count_properly_labeled(system)
               for tree in _all_trees(system.universe_size,
                                      arity_exponent, height))


def brute_is_hereditary(problem):
    """Pairwise definition, enumerated directly: the problem fails to be
    hereditary iff some S admits contexts X_Z (one per pattern Z, each
    leaving Z unbanned) whose completed sequences pairwise first differ
    inside S."""
    n, k, j = problem.n, problem.k, problem.j
    patterns = list(itertools.product(range(j), repeat=k))
    for S in problem.index_subsets():
        s_set = set(S)
        allowed = []
        for Z in patterns:
            allowed.append([X for X in problem.contexts()
                            if Z not in problem.ban_set(S, X)])
        if any(not options for options in allowed):
            continue
        for choice in itertools.product(*allowed):
            full = [assemble(n, S, Z, X) for Z, X in zip(patterns, choice)]
            ok = True
            for a, b in itertools.combinations(full, 2):
                diff = next(p for p in range(n) if a[p] != b[p])
                if diff not in s_set:
                    ok = False
                    break
            if ok:
                return False
    return True
