"""Integer grid primitives shared by every other module.

Grid points are plain tuples of ints.  ``u <= v`` always means the
componentwise partial order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

Point = tuple[int, ...]
Pair = tuple[Point, Point]


def as_point(v: Sequence[int] | int) -> Point:
    if isinstance(v, int):
        return (v,)
    return tuple(int(c) for c in v)


def leq(u: Sequence[int], v: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(u, v))


def unit(n: int, axis: int) -> Point:
    return tuple(1 if i == axis else 0 for i in range(n))


def shift(v: Point, axis: int, step: int = 1) -> Point:
    return v[:axis] + (v[axis] + step,) + v[axis + 1:]


@dataclass(frozen=True)
class GridBox:
    lo: Point
    hi: Point

    def __post_init__(self):
        object.__setattr__(self, "lo", as_point(self.lo))
        object.__setattr__(self, "hi", as_point(self.hi))
        if len(self.lo) != len(self.hi) or not self.lo:
            raise ValueError("box corners must be nonempty vectors of equal length")
        if not leq(self.lo, self.hi):
            raise ValueError(f"box lo {self.lo} is not <= hi {self.hi}")

    @property
    def n(self) -> int:
        return len(self.lo)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(h - l + 1 for l, h in zip(self.lo, self.hi))

    def __contains__(self, v) -> bool:
        return leq(self.lo, v) and leq(v, self.hi)

    def points(self) -> Iterator[Point]:
        """Grid points in lexicographic order."""
        ranges = [range(l, h + 1) for l, h in zip(self.lo, self.hi)]
        return itertools.product(*ranges)

    def points_between(self, u: Point, v: Point) -> Iterator[Point]:
        ranges = [range(a, b + 1) for a, b in zip(u, v)]
        return itertools.product(*ranges)

    def pairs(self) -> Iterator[Pair]:
        """All comparable pairs ``u <= v`` inside the box."""
        for u in self.points():
            for v in self.points_between(u, self.hi):
                yield u, v

    def hull(self, other: "GridBox") -> "GridBox":
        if other.n != self.n:
            raise ValueError("boxes have different dimension")
        return GridBox(
            tuple(map(min, self.lo, other.lo)), tuple(map(max, self.hi, other.hi))
        )


@dataclass(frozen=True, order=False)
class CubeSpec:
    """An integer cube ``{v : x <= v <= y}``; degenerate sides are allowed."""

    x: Point
    y: Point

    def __post_init__(self):
        object.__setattr__(self, "x", as_point(self.x))
        object.__setattr__(self, "y", as_point(self.y))
        if len(self.x) != len(self.y):
            raise ValueError("cube corners have different lengths")
        if not leq(self.x, self.y):
            raise ValueError(f"cube requires x <= y, got {self.x}, {self.y}")

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def eta(self) -> Point:
        return tuple(b - a for a, b in zip(self.x, self.y))

    @property
    def xi(self) -> Point:
        return tuple(b + a for a, b in zip(self.x, self.y))

    @property
    def volume(self) -> int:
        vol = 1
        for e in self.eta:
            vol *= e
        return vol

    @property
    def is_degenerate(self) -> bool:
        return any(a == b for a, b in zip(self.x, self.y))

    def contains(self, v: Sequence[int]) -> bool:
        return leq(self.x, v) and leq(v, self.y)


@dataclass(frozen=True)
class RankInvariant:
    """Integer-valued function on grid pairs, supported on ``u <= v`` inside ``box``.

    Zero entries are dropped on construction, so two invariants compare equal
    exactly when they agree at every pair.  No support checks happen here;
    :func:`persinv.decomposition.check_rank_invariant` does that.
    """

    box: GridBox
    values: Mapping[Pair, int] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for (u, v), val in self.values.items():
            if val:
                cleaned[(as_point(u), as_point(v))] = int(val)
        object.__setattr__(self, "values", cleaned)

    @property
    def n(self) -> int:
        return self.box.n

    def __call__(self, u: Sequence[int], v: Sequence[int]) -> int:
        return self.values.get((as_point(u), as_point(v)), 0)

    def __add__(self, other: "RankInvariant") -> "RankInvariant":
        vals = dict(self.values)
        for key, val in other.values.items():
            vals[key] = vals.get(key, 0) + val
        return RankInvariant(self.box.hull(other.box), vals)

    def is_zero(self) -> bool:
        return not self.values
