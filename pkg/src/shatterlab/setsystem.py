"""Finite set systems over a dense universe [n], stored as bit-vectors.

Sets are integers whose bit i records membership of element i.  The family
is kept sorted and deduplicated so that a system's ``sets`` tuple doubles as
a canonical memoization key for the recursive dimension computations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import InputError

__all__ = [
    "SetSystem",
    "project",
    "dual",
    "child",
    "generate",
    "GENERATOR_KINDS",
]


@dataclass(frozen=True)
class SetSystem:
    universe_size: int
    sets: tuple[int, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        n = self.universe_size
        if n < 0:
            raise InputError("universe_size must be non-negative")
        limit = 1 << n
        for m in self.sets:
            if not 0 <= m < limit:
                raise InputError(f"set {m:#x} out of range for universe [{n}]")
        canonical = tuple(sorted(set(self.sets)))
        if canonical != self.sets:
            object.__setattr__(self, "sets", canonical)

    @classmethod
    def from_iterables(cls, universe_size, families, name=None):
        """Build from an iterable of element collections."""
        masks = []
        for fam in families:
            m = 0
            for x in fam:
                if not 0 <= x < universe_size:
                    raise InputError(f"element {x} out of range for universe [{universe_size}]")
                m |= 1 << x
            masks.append(m)
        return cls(universe_size, tuple(masks), name)

    def members(self, mask):
        return [i for i in range(self.universe_size) if mask >> i & 1]

    def __len__(self):
        return len(self.sets)

    def to_json_dict(self):
        n = self.universe_size
        strings = ["".join("1" if m >> i & 1 else "0" for i in range(n)) for m in self.sets]
        out = {"universe": n, "sets": strings}
        if self.name is not None:
            out["name"] = self.name
        return out

    @classmethod
    def from_json_dict(cls, data):
        try:
            n = int(data["universe"])
            strings = data["sets"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed set-system object: {exc}") from exc
        masks = []
        for s in strings:
            if len(s) != n or set(s) - {"0", "1"}:
                raise InputError(f"bad set string {s!r} for universe [{n}]")
            masks.append(sum(1 << i for i, c in enumerate(s) if c == "1"))
        return cls(n, tuple(masks), data.get("name"))


def project(system: SetSystem, targets) -> SetSystem:
    """Trace the family onto ``targets``, re-indexed to a dense universe.

    Element j of the result is the j-th smallest member of ``targets``.
    """
    ys = sorted(set(targets))
    for y in ys:
        if not 0 <= y < system.universe_size:
            raise InputError(f"projection target {y} out of range")
    traces = set()
    for m in system.sets:
        traces.add(sum(((m >> y) & 1) << j for j, y in enumerate(ys)))
    return SetSystem(len(ys), tuple(traces))


def dual(system: SetSystem) -> SetSystem:
    """Exchange elements and sets via the incidence relation.

    The new base indexes the (canonically sorted) family; element x of the
    original contributes the set of families containing x.
    """
    m = len(system.sets)
    duals = set()
    for x in range(system.universe_size):
        duals.add(sum(1 << i for i, s in enumerate(system.sets) if s >> x & 1))
    return SetSystem(m, tuple(duals))


def child(system: SetSystem, xs, sigma) -> SetSystem:
    """Subfamily consistent with membership pattern ``sigma`` on tuple ``xs``."""
    if len(xs) != len(sigma):
        raise InputError("xs and sigma must have equal length")
    for x in xs:
        if not 0 <= x < system.universe_size:
            raise InputError(f"element {x} out of range")
    kept = [m for m in system.sets
            if all((m >> x & 1) == (1 if b else 0) for x, b in zip(xs, sigma))]
    return SetSystem(system.universe_size, tuple(kept))


def child_masks(sets, xs, sigma):
    """Same filter as :func:`child` but on a raw mask tuple (no revalidation)."""
    want = 0
    for x, b in zip(xs, sigma):
        if b:
            want |= 1 << x
    care = 0
    for x in xs:
        care |= 1 << x
    # A repeated element with conflicting bits can never match.
    for x, b in zip(xs, sigma):
        if ((want >> x) & 1) != (1 if b else 0):
            return ()
    return tuple(m for m in sets if m & care == want)


def _powerset(n):
    return SetSystem(n, tuple(range(1 << n)), name=f"powerset({n})")


def _singletons_with_empty(n):
    return SetSystem(n, (0,) + tuple(1 << i for i in range(n)),
                     name=f"singletons_with_empty({n})")


def _thresholds(n):
    return SetSystem(n, tuple((1 << i) - 1 for i in range(n + 1)),
                     name=f"thresholds({n})")


def _intervals(n):
    masks = {0}
    for a in range(n):
        for b in range(a + 1, n + 1):
            masks.add(((1 << b) - 1) ^ ((1 << a) - 1))
    return SetSystem(n, tuple(masks), name=f"intervals({n})")


def _bounded_size(n, d):
    masks = [m for m in range(1 << n) if bin(m).count("1") <= d]
    return SetSystem(n, tuple(masks), name=f"all_subsets_of_size_at_most({n},{d})")


def halfspace_incidence(arrangement) -> SetSystem:
    """Base = points; one set per half-space, containing the points it covers."""
    pts = arrangement.points
    masks = set()
    for normal, offset in arrangement.halfspaces:
        m = 0
        for i, p in enumerate(pts):
            if sum(a * b for a, b in zip(normal, p)) >= offset:
                m |= 1 << i
        masks.add(m)
    return SetSystem(len(pts), tuple(masks), name="halfspace_incidence")


def halfspace_dual(arrangement) -> SetSystem:
    """Base = half-spaces; one set per point, the half-spaces covering it."""
    hs = arrangement.halfspaces
    masks = set()
    for p in arrangement.points:
        m = 0
        for i, (normal, offset) in enumerate(hs):
            if sum(a * b for a, b in zip(normal, p)) >= offset:
                m |= 1 << i
        masks.add(m)
    return SetSystem(len(hs), tuple(masks), name="halfspace_dual")


GENERATOR_KINDS = (
    "powerset",
    "singletons_with_empty",
    "thresholds",
    "intervals",
    "all_subsets_of_size_at_most",
    "halfspace_incidence",
    "halfspace_dual",
)


def generate(kind, *params) -> SetSystem:
    """Named fixture systems; see ``GENERATOR_KINDS``."""
    try:
        if kind == "powerset":
            (n,) = params
            return _powerset(int(n))
        if kind == "singletons_with_empty":
            (n,) = params
            return _singletons_with_empty(int(n))
        if kind == "thresholds":
            (n,) = params
            return _thresholds(int(n))
        if kind == "intervals":
            (n,) = params
            return _intervals(int(n))
        if kind == "all_subsets_of_size_at_most":
            n, d = params
            return _bounded_size(int(n), int(d))
        if kind == "halfspace_incidence":
            (arr,) = params
            return halfspace_incidence(arr)
        if kind == "halfspace_dual":
            (arr,) = params
            return halfspace_dual(arr)
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad parameters for generator {kind!r}: {exc}") from exc
    raise InputError(f"unknown generator kind {kind!r}")


def all_subfamilies(system):
    """Iterate every subfamily (exponential; test helper for tiny systems)."""
    for r in range(len(system.sets) + 1):
        for combo in itertools.combinations(system.sets, r):
            yield SetSystem(system.universe_size, combo)
