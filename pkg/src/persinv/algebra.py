"""Counting checks for the free algebra generated by the power sums p_{a,b}.

Generators live in degree ``sum(a) + sum(b) >= n``.  The Hilbert series of the
free algebra is the product of ``(1 - t^g)^-1`` over generators of degree g;
these helpers compute it two independent ways and check the combinatorial
identities the counting relies on.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np


@dataclass(frozen=True)
class HilbertCoeffs:
    n: int
    coeffs: tuple[int, ...]

    def __getitem__(self, d: int) -> int:
        return self.coeffs[d]


def count_generators(n: int, d: int) -> int:
    if d < n:
        return 0
    return comb(d + n - 1, 2 * n - 1)


def brute_force_generators(n: int, d: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every (a, b) with a >= 1, b >= 0 componentwise and total degree d."""
    out = []
    for a in itertools.product(range(1, d + 1), repeat=n):
        rest = d - sum(a)
        if rest < 0:
            continue
        for b in itertools.product(range(rest + 1), repeat=n):
            if sum(b) == rest:
                out.append((a, b))
    return out


def hilbert_product_coeffs(n: int, max_degree: int = 10) -> HilbertCoeffs:
    """Truncated coefficients of prod_{d>=0} (1 - t^(n+d))^(-C(d+2n-1, 2n-1))."""
    if n < 1:
        raise ValueError("n must be positive")
    coeffs = [0] * (max_degree + 1)
    coeffs[0] = 1
    for g in range(n, max_degree + 1):
        for _ in range(comb(g - n + 2 * n - 1, 2 * n - 1)):
            # multiply by the geometric series 1/(1 - t^g)
            for k in range(g, max_degree + 1):
                coeffs[k] += coeffs[k - g]
    return HilbertCoeffs(n, tuple(coeffs))


def free_algebra_dim(n: int, d: int) -> int:
    """Number of multisets of generators whose degrees sum to d (by enumeration)."""
    gens = [g for deg in range(n, d + 1) for g in brute_force_generators(n, deg)]
    degrees = [sum(a) + sum(b) for a, b in gens]

    # count non-increasing index sequences, so each multiset appears once
    @lru_cache(maxsize=None)
    def count(remaining: int, max_index: int) -> int:
        if remaining == 0:
            return 1
        return sum(
            count(remaining - degrees[i], i)
            for i in range(max_index + 1)
            if degrees[i] <= remaining
        )

    return count(d, len(gens) - 1) if gens or d == 0 else 0


def admissible_monomial(n: int, m: int, exponents) -> bool:
    """Whether prod eta_ij^a_ij xi_ij^b_ij is an allowed basis monomial.

    ``exponents`` has shape ``(m, n, 2)`` holding ``(a_ij, b_ij)``.  A row that
    is not identically zero must have every eta exponent positive.
    """
    arr = np.asarray(exponents, dtype=int).reshape(m, n, 2)
    for row in arr:
        if row.any() and not (row[:, 0] > 0).all():
            return False
    return True


def _weak_compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def count_admissible_orbits(n: int, m: int, d: int) -> int:
    """Admissible monomials of degree d in m rows, counted up to row permutation."""
    # nonzero row types by degree descending, so low-degree tails are contiguous
    row_types = [r for deg in range(d, 0, -1) for r in _weak_compositions(deg, 2 * n)]
    degree = [sum(r) for r in row_types]
    first_of_degree = {}
    for i, deg in enumerate(degree):
        first_of_degree.setdefault(deg, i)
    zero_row = (0,) * (2 * n)
    count = 0

    def extend(rows: list, start: int, remaining: int) -> None:
        nonlocal count
        if remaining == 0:
            padded = rows + [zero_row] * (m - len(rows))
            arr = [[(r[j], r[n + j]) for j in range(n)] for r in padded]
            count += admissible_monomial(n, m, arr)
            return
        if len(rows) == m:
            return
        # non-increasing choice of rows: one representative per S_m orbit
        for i in range(max(start, first_of_degree[remaining]), len(row_types)):
            rows.append(row_types[i])
            extend(rows, i, remaining - degree[i])
            rows.pop()

    extend([], 0, d)
    return count


def pascal_identity_check(x: int, k: int) -> bool:
    lhs = comb(x + k, x)
    rhs = sum(comb(x + kp - 1, x - 1) for kp in range(k + 1))
    return lhs == rhs
