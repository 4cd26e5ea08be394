"""Signed cube decompositions of generalized rank invariants."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .grid import CubeSpec, GridBox, Pair, Point, RankInvariant, as_point, leq


class NotRankInvariantError(ValueError):
    pass


@dataclass(frozen=True, eq=True)
class SignedCubeSet:
    """Formal integer combination of cubes; zero coefficients are never stored."""

    n: int
    terms: Mapping[CubeSpec, int] = field(default_factory=dict)

    def __post_init__(self):
        merged: dict[CubeSpec, int] = {}
        for cube, coef in self.terms.items():
            if cube.n != self.n:
                raise ValueError(f"cube {cube} does not have dimension {self.n}")
            merged[cube] = merged.get(cube, 0) + int(coef)
        object.__setattr__(self, "terms", {c: k for c, k in merged.items() if k})

    @classmethod
    def from_terms(cls, n: int, items: Iterable[tuple[CubeSpec, int]]) -> "SignedCubeSet":
        merged: dict[CubeSpec, int] = {}
        for cube, coef in items:
            merged[cube] = merged.get(cube, 0) + int(coef)
        return cls(n, merged)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[CubeSpec, int]]:
        return iter(sorted(self.terms.items(), key=lambda t: order_key(t[0])))

    def __add__(self, other: "SignedCubeSet") -> "SignedCubeSet":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        return SignedCubeSet.from_terms(self.n, [*self.terms.items(), *other.terms.items()])

    def __neg__(self) -> "SignedCubeSet":
        return SignedCubeSet(self.n, {c: -k for c, k in self.terms.items()})

    def is_positive(self) -> bool:
        return all(k > 0 for k in self.terms.values())

    def bounding_box(self) -> GridBox:
        if not self.terms:
            raise ValueError("empty cube set has no bounding box")
        cubes = list(self.terms)
        lo = tuple(min(c.x[i] for c in cubes) for i in range(self.n))
        hi = tuple(max(c.y[i] for c in cubes) for i in range(self.n))
        return GridBox(lo, hi)

    def reduce_degenerate(self) -> "SignedCubeSet":
        """Drop zero-volume cubes.  Lossy for the rank invariant."""
        return SignedCubeSet(self.n, {c: k for c, k in self.terms.items() if not c.is_degenerate})


def cube_rank(cube: CubeSpec, u: Sequence[int], v: Sequence[int]) -> int:
    return int(leq(cube.x, u) and leq(u, v) and leq(v, cube.y))


def signed_rank(X: SignedCubeSet, u: Sequence[int], v: Sequence[int]) -> int:
    return sum(coef * cube_rank(cube, u, v) for cube, coef in X.terms.items())


def order_key(cube: CubeSpec) -> tuple:
    # x ascending, ties broken by y descending
    return cube.x, tuple(-c for c in cube.y)


def pair_key(pair: Pair) -> tuple:
    u, v = pair
    return u, tuple(-c for c in v)


def order_cmp(c1: CubeSpec, c2: CubeSpec) -> int:
    """-1, 0 or 1 as ``c1`` precedes, equals or follows ``c2``."""
    k1, k2 = order_key(c1), order_key(c2)
    return (k1 > k2) - (k1 < k2)


@lru_cache(maxsize=64)
def _ordered_pairs(box: GridBox) -> tuple[Pair, ...]:
    return tuple(sorted(box.pairs(), key=pair_key))


def check_rank_invariant(rho: RankInvariant) -> None:
    for (u, v) in rho.values:
        if len(u) != rho.n or len(v) != rho.n:
            raise NotRankInvariantError("not a generalized rank invariant: wrong point length")
        if not leq(u, v):
            raise NotRankInvariantError(
                f"not a generalized rank invariant: nonzero value at {u} !<= {v}"
            )
        if u not in rho.box or v not in rho.box:
            raise NotRankInvariantError(
                f"not a generalized rank invariant: support at ({u}, {v}) leaves the box"
            )


def decompose(rho: RankInvariant, *, debug: bool = False) -> SignedCubeSet:
    """The unique signed cube set whose rank invariant is ``rho``.

    Greedy: walk comparable pairs in cube order; whenever the working
    invariant is nonzero at ``(x, y)``, record that value on the cube
    ``(x, y)`` and subtract the cube's indicator.  A cube's support only
    contains pairs at or after itself in the order, so the cursor never
    needs to move back.
    """
    check_rank_invariant(rho)
    work = dict(rho.values)
    terms: dict[CubeSpec, int] = {}
    if not work:
        return SignedCubeSet(rho.n, terms)
    box = rho.box
    for pivot in _ordered_pairs(box):
        c = work.get(pivot, 0)
        if not c:
            continue
        x, y = pivot
        terms[CubeSpec(x, y)] = c
        for u in box.points_between(x, y):
            for v in box.points_between(u, y):
                left = work.get((u, v), 0) - c
                if left:
                    work[(u, v)] = left
                else:
                    work.pop((u, v), None)
        if debug:
            pk = pair_key(pivot)
            assert all(pair_key(p) > pk for p in work), "greedy loop invariant broken"
        if not work:
            break
    if work:
        raise AssertionError("decomposition did not exhaust the invariant")
    return SignedCubeSet(rho.n, terms)


def reconstruct(X: SignedCubeSet, box: GridBox) -> RankInvariant:
    """Rank invariant of ``X`` tabulated over ``box``."""
    if box.n != X.n:
        raise ValueError("dimension mismatch")
    values: dict[Pair, int] = {}
    for cube, coef in X.terms.items():
        if cube.x not in box or cube.y not in box:
            raise ValueError(f"cube {cube} lies outside box {box}")
        for u in box.points_between(cube.x, cube.y):
            for v in box.points_between(u, cube.y):
                values[(u, v)] = values.get((u, v), 0) + coef
    return RankInvariant(box, values)
