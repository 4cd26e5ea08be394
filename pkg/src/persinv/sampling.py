"""Seeded random generators for cubes, signed cube sets and modules."""
from __future__ import annotations

import random

import numpy as np

from . import linalg
from .core import PersistenceModule, direct_sum, interval_module, module_from_cubes, validate
from .decomposition import SignedCubeSet
from .grid import CubeSpec, GridBox, leq, shift


def random_cube(rng: random.Random, n: int, side: int, nondegenerate: bool = False, lo: int = 0) -> CubeSpec:
    hi = lo + side - 1
    while True:
        xs, ys = [], []
        for _ in range(n):
            a, b = sorted((rng.randint(lo, hi), rng.randint(lo, hi)))
            xs.append(a)
            ys.append(b)
        cube = CubeSpec(tuple(xs), tuple(ys))
        if not (nondegenerate and cube.is_degenerate):
            return cube


def random_degenerate_cube(rng: random.Random, n: int, side: int, lo: int = 0) -> CubeSpec:
    cube = random_cube(rng, n, side, lo=lo)
    axis = rng.randrange(n)
    y = list(cube.y)
    y[axis] = cube.x[axis]
    return CubeSpec(cube.x, tuple(y))


def random_signed_set(
    rng: random.Random, n: int, side: int, max_terms: int = 8, max_coef: int = 3
) -> SignedCubeSet:
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        coef = rng.choice([c for c in range(-max_coef, max_coef + 1) if c])
        terms.append((random_cube(rng, n, side), coef))
    return SignedCubeSet.from_terms(n, terms)


def random_cube_list(
    rng: random.Random, n: int, side: int, max_cubes: int = 4, nondegenerate: bool = True
) -> list[tuple[CubeSpec, int]]:
    return [
        (random_cube(rng, n, side, nondegenerate=nondegenerate), rng.randint(1, 2))
        for _ in range(rng.randint(1, max_cubes))
    ]


def _random_convex_support(rng: random.Random, box: GridBox) -> list[tuple[int, ...]]:
    """Intersection of a random up-set and a random down-set (always convex)."""
    while True:
        ups = [tuple(rng.randint(l, h) for l, h in zip(box.lo, box.hi)) for _ in range(rng.randint(1, 2))]
        downs = [tuple(rng.randint(l, h) for l, h in zip(box.lo, box.hi)) for _ in range(rng.randint(1, 2))]
        supp = [
            v for v in box.points()
            if any(leq(g, v) for g in ups) and any(leq(v, h) for h in downs)
        ]
        if supp:
            return supp


def _unimodular(rng: random.Random, d: int) -> tuple[np.ndarray, np.ndarray]:
    """A random integer matrix with integer inverse, and that inverse."""
    g, g_inv = linalg.identity(d), linalg.identity(d)
    for _ in range(2 * d if d > 1 else 0):
        i, j = rng.sample(range(d), 2)
        c = rng.choice([-2, -1, 1, 2])
        # row_i += c * row_j ; inverse applies column_j -= c * column_i on the right
        g[i, :] = g[i, :] + c * g[j, :]
        g_inv[:, j] = g_inv[:, j] - c * g_inv[:, i]
    if d:
        sign = rng.choice([1, -1])
        g[0, :] = sign * g[0, :]
        g_inv[:, 0] = sign * g_inv[:, 0]
    return g, g_inv


def twist(module: PersistenceModule, rng: random.Random) -> PersistenceModule:
    """Random pointwise change of basis; the result is isomorphic to ``module``."""
    bases = {v: _unimodular(rng, module.dim(v)) for v in module.box.points()}
    maps = {}
    for v in module.box.points():
        for ax in range(module.n):
            w = shift(v, ax)
            if w in module.box:
                maps[(v, ax)] = linalg.matmul(
                    linalg.matmul(bases[w][0], module.structure_map(v, ax)), bases[v][1]
                )
    return PersistenceModule(module.box, dict(module.dims), maps)


def random_general_module(
    rng: random.Random, n: int, side: int, max_dim: int = 3, max_summands: int = 4
) -> PersistenceModule:
    """Sum of random convex-support interval modules, twisted by a change of basis.

    Supports are not restricted to cubes, so decompositions can carry negative
    coefficients.  Summands that would push some dimension above ``max_dim``
    are skipped.
    """
    box = GridBox((0,) * n, (side - 1,) * n)
    module = PersistenceModule(box, {}, {})
    for _ in range(rng.randint(1, max_summands)):
        summand = interval_module(box, _random_convex_support(rng, box))
        if any(module.dim(v) + summand.dim(v) > max_dim for v in box.points()):
            continue
        module = direct_sum(module, summand)
    module = twist(module, rng)
    report = validate(module)
    assert report.ok, report.violations
    return module


def random_cube_module(rng: random.Random, n: int, side: int, max_cubes: int = 4):
    cubes = random_cube_list(rng, n, side, max_cubes)
    return module_from_cubes(n, cubes), cubes


def random_recoverable_set(
    rng: random.Random, n: int, max_summands: int = 4, lo: int = 1, hi: int = 9, ratio: float = 2 / 3
) -> SignedCubeSet:
    """Positive non-degenerate cubes whose volumes pairwise differ by ``ratio``."""
    while True:
        count = rng.randint(1, max_summands)
        cubes = [random_cube(rng, n, hi - lo + 1, nondegenerate=True, lo=lo) for _ in range(count)]
        vols = sorted((c.volume for c in cubes), reverse=True)
        if all(b <= ratio * a for a, b in zip(vols, vols[1:])):
            return SignedCubeSet.from_terms(n, [(c, 1) for c in cubes])
