"""Finite integer-indexed persistence modules and their rank invariant."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .grid import CubeSpec, GridBox, Point, RankInvariant, as_point, leq, shift


class InvalidModuleError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str  # "shape", "dimension" or "commutativity"
    point: Point
    axes: tuple[int, ...]
    detail: str = ""


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)


@dataclass(frozen=True, eq=False)
class PersistenceModule:
    """A persistence module on a finite grid box.

    ``dims`` maps grid points to dimensions (missing points have dimension 0).
    ``maps[(v, axis)]`` is the integer matrix of the structure map
    ``M_v -> M_{v + e_axis}``, shape ``dim(v + e) x dim(v)``.  Missing maps are
    read as zero matrices.  Outside the box every space is zero.
    """

    box: GridBox
    dims: Mapping[Point, int]
    maps: Mapping[tuple[Point, int], np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "dims", {as_point(v): int(d) for v, d in self.dims.items() if d}
        )
        object.__setattr__(
            self,
            "maps",
            {
                (as_point(v), int(ax)): m if isinstance(m, np.ndarray) else linalg.int_matrix(m)
                for (v, ax), m in self.maps.items()
            },
        )

    @property
    def n(self) -> int:
        return self.box.n

    def dim(self, v: Sequence[int]) -> int:
        return self.dims.get(tuple(v), 0)

    def structure_map(self, v: Point, axis: int) -> np.ndarray:
        target = shift(v, axis)
        stored = self.maps.get((v, axis))
        if stored is not None and v in self.box and target in self.box:
            return stored
        return linalg.zeros(self.dim(target), self.dim(v))

    @cached_property
    def report(self) -> ValidationReport:
        return validate(self)

    @property
    def is_valid(self) -> bool:
        return self.report.ok


def validate(module: PersistenceModule) -> ValidationReport:
    """Check matrix shapes and commutativity of every elementary square."""
    report = ValidationReport()
    box = module.box
    for v, d in module.dims.items():
        if d < 0:
            report.violations.append(Violation("dimension", v, (), f"negative dimension {d}"))
        if v not in box:
            report.violations.append(Violation("dimension", v, (), "point outside box"))
    bad_shape = set()
    for (v, ax), mat in module.maps.items():
        target = shift(v, ax)
        if v not in box or target not in box:
            report.violations.append(Violation("shape", v, (ax,), "map leaves the box"))
            bad_shape.add((v, ax))
            continue
        want = (module.dim(target), module.dim(v))
        if tuple(mat.shape) != want:
            report.violations.append(
                Violation("shape", v, (ax,), f"expected {want}, got {tuple(mat.shape)}")
            )
            bad_shape.add((v, ax))
    n = module.n
    for v in box.points():
        for e in range(n):
            for f in range(e + 1, n):
                top = shift(shift(v, e), f)
                if top not in box:
                    continue
                if {(v, e), (v, f), (shift(v, e), f), (shift(v, f), e)} & bad_shape:
                    continue
                via_e = linalg.matmul(
                    module.structure_map(shift(v, e), f), module.structure_map(v, e)
                )
                via_f = linalg.matmul(
                    module.structure_map(shift(v, f), e), module.structure_map(v, f)
                )
                if not linalg.equal(via_e, via_f):
                    report.violations.append(
                        Violation("commutativity", v, (e, f), "square does not commute")
                    )
    return report


def zero_module(box: GridBox) -> PersistenceModule:
    return PersistenceModule(box, {}, {})


def _require_valid(module: PersistenceModule) -> None:
    if not module.is_valid:
        raise InvalidModuleError("invalid module")


def _normalize_cubes(cubes) -> list[tuple[CubeSpec, int]]:
    out = []
    for item in cubes:
        if isinstance(item, CubeSpec):
            cube, mult = item, 1
        else:
            cube, mult = item
            if not isinstance(cube, CubeSpec):
                cube = CubeSpec(*cube)
        if int(mult) < 1:
            raise ValueError("cube multiplicities must be positive")
        out.append((cube, int(mult)))
    return out


def module_from_cubes(n: int, cubes: Iterable) -> PersistenceModule:
    """Direct sum of cube modules.

    ``cubes`` holds ``(CubeSpec, multiplicity)`` pairs (bare ``CubeSpec``
    means multiplicity 1).  The basis at each point lists the summands that
    contain it, in input order, so every structure map is a 0/1 selection.
    """
    items = _normalize_cubes(cubes)
    if not items:
        raise ValueError("empty module not representable")
    for cube, _ in items:
        if cube.n != n:
            raise ValueError(f"cube {cube} does not have dimension {n}")
    lo = tuple(min(c.x[i] for c, _ in items) for i in range(n))
    hi = tuple(max(c.y[i] for c, _ in items) for i in range(n))
    box = GridBox(lo, hi)
    summands = [k for k, (_, mult) in enumerate(items) for _ in range(mult)]
    basis = {}
    for v in box.points():
        basis[v] = [s for s, k in enumerate(summands) if items[k][0].contains(v)]
    dims = {v: len(b) for v, b in basis.items()}
    maps = {}
    for v in box.points():
        for ax in range(n):
            w = shift(v, ax)
            if w not in box:
                continue
            mat = linalg.zeros(len(basis[w]), len(basis[v]))
            where = {s: r for r, s in enumerate(basis[w])}
            for c, s in enumerate(basis[v]):
                if s in where:
                    mat[where[s], c] = 1
            maps[(v, ax)] = mat
    return PersistenceModule(box, dims, maps)


def interval_module(box: GridBox, support: Iterable[Sequence[int]]) -> PersistenceModule:
    """One-dimensional on ``support`` with identity maps inside it.

    Valid exactly when the support is convex in the grid order; callers that
    are unsure should run :func:`validate`.
    """
    supp = {as_point(v) for v in support}
    dims = {v: 1 for v in supp if v in box}
    maps = {}
    for v in dims:
        for ax in range(box.n):
            w = shift(v, ax)
            if w in dims:
                maps[(v, ax)] = linalg.int_matrix([[1]])
    return PersistenceModule(box, dims, maps)


def direct_sum(a: PersistenceModule, b: PersistenceModule) -> PersistenceModule:
    if a.n != b.n:
        raise ValueError(f"cannot sum modules with n={a.n} and n={b.n}")
    box = a.box.hull(b.box)
    dims = {v: a.dim(v) + b.dim(v) for v in box.points()}
    maps = {}
    for v in box.points():
        for ax in range(box.n):
            if shift(v, ax) in box:
                maps[(v, ax)] = linalg.block_diag(
                    a.structure_map(v, ax), b.structure_map(v, ax)
                )
    return PersistenceModule(box, dims, maps)


def composite(
    module: PersistenceModule, u: Point, v: Point, axis_order: Sequence[int] | None = None
) -> np.ndarray:
    """Matrix of ``M_u -> M_v`` along a monotone path.

    The path exhausts the axes in ``axis_order`` one at a time (default: axis 0
    first).  Requires ``u <= v``.
    """
    u, v = as_point(u), as_point(v)
    if not leq(u, v):
        raise ValueError(f"{u} is not <= {v}")
    order = range(module.n) if axis_order is None else axis_order
    mat = linalg.identity(module.dim(u))
    cur = u
    for ax in order:
        for _ in range(v[ax] - u[ax]):
            mat = linalg.matmul(module.structure_map(cur, ax), mat)
            cur = shift(cur, ax)
    return mat


def rank(module: PersistenceModule, u: Sequence[int], v: Sequence[int]) -> int:
    """Rank of ``M_u -> M_v``; 0 unless ``u <= v`` with both inside the box."""
    _require_valid(module)
    u, v = as_point(u), as_point(v)
    if len(u) != module.n or len(v) != module.n:
        raise ValueError("grid points have the wrong length")
    if not leq(u, v) or u not in module.box or v not in module.box:
        return 0
    if module.dim(u) == 0 or module.dim(v) == 0:
        return 0
    return linalg.rank(composite(module, u, v))


def rank_real(module: PersistenceModule, u: Sequence[float], v: Sequence[float]) -> int:
    u = [u] if isinstance(u, (int, float)) else list(u)
    v = [v] if isinstance(v, (int, float)) else list(v)
    if not leq(u, v):
        return 0
    return rank(module, [math.floor(c) for c in u], [math.ceil(c) for c in v])


def rank_table(module: PersistenceModule) -> RankInvariant:
    """Rank invariant at every comparable pair in the box.

    For each source ``u`` the composites to all ``v >= u`` are built by one
    sweep in lexicographic order, reusing ``M_u -> M_{v - e}`` where ``e`` is
    the last axis on which ``v`` exceeds ``u``.
    """
    _require_valid(module)
    box = module.box
    values = {}
    for u in box.points():
        if module.dim(u) == 0:
            continue
        comp = {u: linalg.identity(module.dim(u))}
        for v in box.points_between(u, box.hi):
            if v != u:
                last = max(i for i in range(box.n) if v[i] > u[i])
                prev = shift(v, last, -1)
                comp[v] = linalg.matmul(module.structure_map(prev, last), comp[prev])
            r = linalg.rank(comp[v])
            if r:
                values[(u, v)] = r
    return RankInvariant(box, values)
