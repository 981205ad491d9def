"""Integer submodular functions on small ground sets.

Subsets of the ground set are bitmasks: bit i corresponds to element i in
the fixed ground order.  A function is a lazy expression tree; every node
memoizes its values, so deeply composed constructions (duals of reductions
of scalings, ...) stay cheap at desk scale.  All values are integers and
f(empty) = 0 by construction.

Instances are immutable after construction except for the per-node value
cache.  An instance may be shared read-only across threads only if access
to it is externally synchronized; otherwise treat instances as owned by a
single thread (they transfer freely).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import UsageError

DEFAULT_GROUND_LIMIT = 12

_limit_override: int | None = None


def set_ground_limit(n: int | None) -> None:
    """Override the ground-set size cap (None restores env/default)."""
    global _limit_override
    _limit_override = n


def ground_limit() -> int:
    if _limit_override is not None:
        return _limit_override
    env = os.environ.get("POLYBASE_LIMIT_N")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"POLYBASE_LIMIT_N is not an integer: {env!r}")
    return DEFAULT_GROUND_LIMIT


# ---------------------------------------------------------------------------
# ground sets and subset masks
# ---------------------------------------------------------------------------

def bits(mask: int):
    """Yield the set bit positions of mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass(frozen=True)
class GroundSet:
    """An ordered finite set of named elements.

    The construction order is canonical: it fixes bit positions, subset
    iteration order and every tie-break in the package.
    """

    elements: tuple[str, ...]

    def __post_init__(self):
        if not isinstance(self.elements, tuple):
            object.__setattr__(self, "elements", tuple(self.elements))
        if len(set(self.elements)) != len(self.elements):
            raise UsageError(f"ground elements are not distinct: {self.elements}")
        limit = ground_limit()
        if not 1 <= len(self.elements) <= limit:
            raise UsageError(
                f"ground set size {len(self.elements)} outside [1, {limit}]"
            )

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise UsageError(f"unknown ground element {name!r}")

    def mask_of(self, names) -> int:
        m = 0
        for name in names:
            m |= 1 << self.index(name)
        return m

    def names_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.elements[i] for i in bits(mask))

    def subsets(self):
        """All subset masks in canonical (increasing bitmask) order."""
        return range(1 << self.n)


def _check_int_vector(a, n: int, what: str) -> tuple[int, ...]:
    a = tuple(a)
    if len(a) != n:
        raise UsageError(f"{what} has length {len(a)}, ground set has {n}")
    for v in a:
        if not isinstance(v, int) or isinstance(v, bool):
            raise UsageError(f"{what} must have integer entries, got {v!r}")
    return a


def vector_sum(x, mask: int) -> int:
    """Coordinate sum of x over the subset mask: x(U)."""
    return sum(x[i] for i in bits(mask))


# ---------------------------------------------------------------------------
# function nodes
# ---------------------------------------------------------------------------

class SubmodularFn:
    """Base class for evaluable integer set functions.

    Calling an instance with a subset mask returns the integer value.
    Construction helpers (dual, shift, reduce, ...) build new lazy nodes;
    nothing is materialized unless ``materialize`` is called.
    """

    def __init__(self, ground: GroundSet):
        self.ground = ground
        self._cache: dict[int, int] = {}

    def __call__(self, mask: int) -> int:
        if not 0 <= mask <= self.ground.full_mask:
            raise UsageError(
                f"mask {mask:#x} out of range for ground set of size {self.ground.n}"
            )
        got = self._cache.get(mask)
        if got is None:
            got = self._value(mask)
            self._cache[mask] = got
        return got

    def _value(self, mask: int) -> int:
        raise NotImplementedError

    # -- constructions ------------------------------------------------

    def dual(self) -> "SubmodularFn":
        return DualFn(self)

    def shift(self, a) -> "SubmodularFn":
        return ShiftFn(self, a)

    def reduce(self, a) -> "SubmodularFn":
        return ReduceFn(self, a)

    def reduce_at(self, element: str, cap: int) -> "SubmodularFn":
        return ReduceAtFn(self, element, cap)

    def scale(self, r: int) -> "SubmodularFn":
        return ScaleFn(r, self)

    def block_restrict(self, a_prev: int, block: int) -> "SubmodularFn":
        return BlockRestrictFn(self, a_prev, block)

    # -- serialization ------------------------------------------------

    def to_node_dict(self) -> dict:
        raise NotImplementedError


class TableFn(SubmodularFn):
    """Explicit table of all 2^n values."""

    def __init__(self, ground: GroundSet, values):
        super().__init__(ground)
        values = tuple(values)
        if len(values) != 1 << ground.n:
            raise UsageError(
                f"table has {len(values)} entries, expected {1 << ground.n}"
            )
        for v in values:
            if not isinstance(v, int) or isinstance(v, bool):
                raise UsageError(f"table values must be integers, got {v!r}")
        if values[0] != 0:
            raise UsageError(f"table value on the empty set must be 0, got {values[0]}")
        self.values = values

    def _value(self, mask: int) -> int:
        return self.values[mask]

    def to_node_dict(self) -> dict:
        vals = {}
        for mask in self.ground.subsets():
            key = ",".join(sorted(self.ground.names_of(mask)))
            vals[key] = self.values[mask]
        return {"type": "table", "values": vals}


class UniformRank(SubmodularFn):
    """Rank function of the uniform matroid: min(|U|, r)."""

    def __init__(self, ground: GroundSet, rank: int):
        super().__init__(ground)
        if not isinstance(rank, int) or rank < 0:
            raise UsageError(f"uniform rank must be a nonnegative integer, got {rank!r}")
        self.rank = rank

    def _value(self, mask: int) -> int:
        return min(popcount(mask), self.rank)

    def to_node_dict(self) -> dict:
        return {"type": "uniform", "rank": self.rank}


class PartitionRank(SubmodularFn):
    """Rank function of a partition matroid: sum of per-block capped counts."""

    def __init__(self, ground: GroundSet, blocks, caps):
        super().__init__(ground)
        blocks = tuple(blocks)
        caps = tuple(caps)
        if len(blocks) != len(caps):
            raise UsageError("partition blocks and caps must have equal length")
        seen = 0
        for b in blocks:
            if b & seen:
                raise UsageError("partition blocks overlap")
            seen |= b
        if seen != ground.full_mask:
            raise UsageError("partition blocks do not cover the ground set")
        for c in caps:
            if not isinstance(c, int) or c < 0:
                raise UsageError(f"partition caps must be nonnegative integers, got {c!r}")
        self.blocks = blocks
        self.caps = caps

    def _value(self, mask: int) -> int:
        return sum(
            min(popcount(mask & b), c) for b, c in zip(self.blocks, self.caps)
        )

    def to_node_dict(self) -> dict:
        return {
            "type": "partition",
            "blocks": [list(self.ground.names_of(b)) for b in self.blocks],
            "caps": list(self.caps),
        }


class GraphicRank(SubmodularFn):
    """Rank function of a graphic matroid.

    Ground element i is edge i of a multigraph on ``vertices`` vertices;
    rank of an edge subset = edges kept by union-find cycle elimination.
    """

    def __init__(self, ground: GroundSet, vertices: int, edges):
        super().__init__(ground)
        edges = tuple((int(u), int(v)) for u, v in edges)
        if len(edges) != ground.n:
            raise UsageError(
                f"got {len(edges)} edges for a ground set of {ground.n} elements"
            )
        if vertices < 1:
            raise UsageError("graphic matroid needs at least one vertex")
        for u, v in edges:
            if not (0 <= u < vertices and 0 <= v < vertices):
                raise UsageError(f"edge ({u},{v}) outside vertex range 0..{vertices - 1}")
        self.vertices = vertices
        self.edges = edges

    def _value(self, mask: int) -> int:
        parent = list(range(self.vertices))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        rank = 0
        for i in bits(mask):
            u, v = self.edges[i]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                rank += 1
        return rank

    def to_node_dict(self) -> dict:
        return {
            "type": "graphic",
            "vertices": self.vertices,
            "edges": [list(e) for e in self.edges],
        }


class DualFn(SubmodularFn):
    """f*(U) = f(E - U) - f(E); reflects the base polytope through 0."""

    def __init__(self, inner: SubmodularFn):
        super().__init__(inner.ground)
        self.inner = inner

    def _value(self, mask: int) -> int:
        full = self.ground.full_mask
        return self.inner(full ^ mask) - self.inner(full)

    def to_node_dict(self) -> dict:
        return {"type": "dual", "inner": self.inner.to_node_dict()}


class ShiftFn(SubmodularFn):
    """(f + a)(U) = f(U) + a(U) for an integer vector a."""

    def __init__(self, inner: SubmodularFn, a):
        super().__init__(inner.ground)
        self.inner = inner
        self.a = _check_int_vector(a, inner.ground.n, "shift vector")

    def _value(self, mask: int) -> int:
        return self.inner(mask) + vector_sum(self.a, mask)

    def to_node_dict(self) -> dict:
        return {"type": "shift", "a": list(self.a), "inner": self.inner.to_node_dict()}


class ReduceFn(SubmodularFn):
    """(f | a)(U) = min over T subset of U of f(T) + a(U - T).

    Clips the extended polymatroid by the box x <= a.  Evaluated by
    exhaustive minimization over T; the inner function's cache keeps the
    recursion polynomial in practice at desk scale.
    """

    def __init__(self, inner: SubmodularFn, a):
        super().__init__(inner.ground)
        self.inner = inner
        self.a = _check_int_vector(a, inner.ground.n, "reduction vector")

    def _value(self, mask: int) -> int:
        inner = self.inner
        a = self.a
        a_mask = vector_sum(a, mask)
        best = inner(mask)  # T = U
        # iterate proper subsets T of mask
        t = (mask - 1) & mask
        while t != mask:
            cand = inner(t) + a_mask - vector_sum(a, t)
            if cand < best:
                best = cand
            if t == 0:
                break
            t = (t - 1) & mask
        return best

    def to_node_dict(self) -> dict:
        return {"type": "reduce", "a": list(self.a), "inner": self.inner.to_node_dict()}


class ReduceAtFn(ReduceFn):
    """f | (e0, c): cap coordinate e0 at c, all others at f({e})."""

    def __init__(self, inner: SubmodularFn, element: str, cap: int):
        if not isinstance(cap, int) or isinstance(cap, bool):
            raise UsageError(f"cap must be an integer, got {cap!r}")
        pos = inner.ground.index(element)
        a = [inner(1 << i) for i in range(inner.ground.n)]
        a[pos] = cap
        super().__init__(inner, a)
        self.element = element
        self.cap = cap

    def to_node_dict(self) -> dict:
        return {
            "type": "reduce_at",
            "e": self.element,
            "c": self.cap,
            "inner": self.inner.to_node_dict(),
        }


class ScaleFn(SubmodularFn):
    """(r f)(U) = r * f(U) for a positive integer r."""

    def __init__(self, r: int, inner: SubmodularFn):
        super().__init__(inner.ground)
        if not isinstance(r, int) or isinstance(r, bool) or r < 1:
            raise UsageError(f"scale factor must be a positive integer, got {r!r}")
        self.r = r
        self.inner = inner

    def _value(self, mask: int) -> int:
        return self.r * self.inner(mask)

    def to_node_dict(self) -> dict:
        return {"type": "scale", "r": self.r, "inner": self.inner.to_node_dict()}


class BlockRestrictFn(SubmodularFn):
    """Block function of a tight-chain step: U -> f(A_prev + U) - f(A_prev).

    Lives on a new ground set holding just the block's elements (in the
    parent's canonical order); used to factor faces into direct sums.
    """

    def __init__(self, inner: SubmodularFn, a_prev: int, block: int):
        if block == 0:
            raise UsageError("block restriction needs a nonempty block")
        if a_prev & block:
            raise UsageError("block restriction: A_prev and block overlap")
        full = inner.ground.full_mask
        if a_prev & ~full or block & ~full:
            raise UsageError("block restriction masks out of range")
        positions = tuple(bits(block))
        ground = GroundSet(tuple(inner.ground.elements[i] for i in positions))
        super().__init__(ground)
        self.inner = inner
        self.a_prev = a_prev
        self.block = block
        self._positions = positions

    def _parent_mask(self, mask: int) -> int:
        m = 0
        for j in bits(mask):
            m |= 1 << self._positions[j]
        return m

    def _value(self, mask: int) -> int:
        return self.inner(self.a_prev | self._parent_mask(mask)) - self.inner(self.a_prev)

    def to_node_dict(self) -> dict:
        parent = self.inner.ground
        return {
            "type": "block_restrict",
            "a_prev": list(parent.names_of(self.a_prev)),
            "block": list(parent.names_of(self.block)),
            "inner": self.inner.to_node_dict(),
        }


# ---------------------------------------------------------------------------
# whole-function checks
# ---------------------------------------------------------------------------

def is_submodular(f: SubmodularFn):
    """Exhaustive submodularity check.

    Returns (True, None) or (False, (A, B)) with the first violating pair
    in canonical order: f(A) + f(B) < f(A | B) + f(A & B).
    """
    total = 1 << f.ground.n
    vals = [f(m) for m in range(total)]
    for a in range(total):
        va = vals[a]
        for b in range(a + 1, total):
            if va + vals[b] < vals[a | b] + vals[a & b]:
                return False, (a, b)
    return True, None


def is_matroid_rank(f: SubmodularFn) -> bool:
    """Check nonnegativity, monotonicity and the unit-increment cap.

    Assumes f is submodular (not re-checked); under that assumption the
    three conditions characterize matroid rank functions.
    """
    n = f.ground.n
    for mask in f.ground.subsets():
        v = f(mask)
        if v < 0 or v > popcount(mask):
            return False
        for i in range(n):
            if not mask & (1 << i) and f(mask | (1 << i)) < v:
                return False
    return True


def materialize(f: SubmodularFn) -> TableFn:
    """Evaluate every subset and freeze the result into an explicit table."""
    return TableFn(f.ground, [f(m) for m in f.ground.subsets()])
