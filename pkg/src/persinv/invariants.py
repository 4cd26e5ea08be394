"""Exact evaluation of the integral invariants F_{a,b} and power sums p_{a,b}.

Both families are indexed by ``(a, b)`` with every ``a_i >= 1``.  On a single
cube with side lengths ``eta = y - x`` and doubled centre ``xi = y + x``,
``p_{a,b} = prod eta_i^{a_i} xi_i^{b_i}``; on signed cube sets everything is
extended linearly.  All arithmetic is :class:`fractions.Fraction`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Literal, Sequence

from .core import PersistenceModule, rank_table
from .decomposition import SignedCubeSet, decompose
from .grid import CubeSpec, RankInvariant

Family = Literal["F", "p"]


@dataclass(frozen=True, order=False)
class InvariantIndex:
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(v) for v in self.a)
        b = tuple(int(v) for v in self.b)
        if len(a) != len(b) or not a:
            raise ValueError("a and b must be nonempty and of equal length")
        if any(v < 1 for v in a):
            raise ValueError(f"index outside N_+: a={a}")
        if any(v < 0 for v in b):
            raise ValueError(f"b must be nonnegative: b={b}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def I(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.a) if v == 1)

    @property
    def J(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.a) if v > 1)

    @property
    def degree(self) -> int:
        return sum(self.a) + sum(self.b)

    def sort_key(self):
        return self.degree, self.a, self.b

    def precedes(self, other: "InvariantIndex") -> bool:
        """The partial order used for triangularity: same degree and a <= a'."""
        return self.degree == other.degree and all(
            p <= q for p, q in zip(self.a, other.a)
        )


def _compositions(total: int, parts: int, minimum: int) -> Iterable[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def indices_of_degree(n: int, degree: int) -> list[InvariantIndex]:
    """Every (a, b) of the given total degree, in lexicographic order."""
    out = []
    for asum in range(n, degree + 1):
        for a in _compositions(asum, n, 1):
            for b in _compositions(degree - asum, n, 0):
                out.append(InvariantIndex(a, b))
    out.sort(key=InvariantIndex.sort_key)
    return out


def indices_up_to(n: int, max_degree: int) -> list[InvariantIndex]:
    return [idx for d in range(n, max_degree + 1) for idx in indices_of_degree(n, d)]


# -- closed forms ------------------------------------------------------------


def f_interval_1d(a: int, b: int, x: int, y: int) -> Fraction:
    if a < 1:
        raise ValueError("index outside N_+")
    if b < 0:
        raise ValueError("b must be nonnegative")
    if x > y:
        raise ValueError("interval requires x <= y")
    if x == y:
        return Fraction(0)
    if a == 1:
        return Fraction(y ** (b + 1) - x ** (b + 1), b + 1)
    eta, xi = y - x, y + x
    total = Fraction(0)
    for i in range(1, b + 2, 2):
        coef = Fraction(
            factorial(a - 2) * factorial(b), factorial(a - 1 + i) * factorial(b + 1 - i)
        )
        total += coef * eta ** (a - 1 + i) * xi ** (b + 1 - i)
    return total


def _check_dims(idx: InvariantIndex, n: int) -> None:
    if idx.n != n:
        raise ValueError(f"index has n={idx.n} but data has n={n}")


def f_cube(idx: InvariantIndex, cube: CubeSpec) -> Fraction:
    _check_dims(idx, cube.n)
    out = Fraction(1)
    for a, b, x, y in zip(idx.a, idx.b, cube.x, cube.y):
        out *= f_interval_1d(a, b, x, y)
        if not out:
            break
    return out


def f_signed(idx: InvariantIndex, X: SignedCubeSet) -> Fraction:
    _check_dims(idx, X.n)
    return sum((c * f_cube(idx, cube) for cube, c in X.terms.items()), Fraction(0))


def p_cube(idx: InvariantIndex, cube: CubeSpec) -> int:
    _check_dims(idx, cube.n)
    out = 1
    for a, b, e, s in zip(idx.a, idx.b, cube.eta, cube.xi):
        out *= e**a * s**b
    return out


def p_signed(idx: InvariantIndex, X: SignedCubeSet) -> Fraction:
    _check_dims(idx, X.n)
    return Fraction(sum(c * p_cube(idx, cube) for cube, c in X.terms.items()))


def module_decomposition(module: PersistenceModule) -> SignedCubeSet:
    return decompose(rank_table(module))


def f_module(idx: InvariantIndex, module: PersistenceModule) -> Fraction:
    return f_signed(idx, module_decomposition(module))


def p_module(idx: InvariantIndex, module: PersistenceModule) -> Fraction:
    return p_signed(idx, module_decomposition(module))


# -- integration oracle ------------------------------------------------------


def _mono_interval(p: int, lo: int, hi: int) -> Fraction:
    return Fraction(hi ** (p + 1) - lo ** (p + 1), p + 1)


def _mono_triangle(s: int, t: int, k: int) -> Fraction:
    """Integral of z^s z'^t over k < z < z' < k + 1."""
    k1 = k + 1
    outer = Fraction(k1 ** (s + t + 2) - k ** (s + t + 2), s + t + 2)
    inner = k ** (s + 1) * Fraction(k1 ** (t + 1) - k ** (t + 1), t + 1)
    return (outer - inner) / (s + 1)


@lru_cache(maxsize=None)
def _weight_expansion(a: int, b: int) -> tuple[tuple[int, int, int], ...]:
    """(z' - z)^(a-2) (z + z')^b as a list of (coef, power of z, power of z')."""
    terms: dict[tuple[int, int], int] = {}
    p = a - 2
    for i in range(p + 1):
        c1 = comb(p, i) * (-1) ** (p - i)  # z'^i z^(p-i)
        for j in range(b + 1):
            c2 = comb(b, j)  # z^j z'^(b-j)
            key = (p - i + j, i + b - j)
            terms[key] = terms.get(key, 0) + c1 * c2
    return tuple((c, s, t) for (s, t), c in sorted(terms.items()) if c)


@lru_cache(maxsize=None)
def _cell_weight_pair(a: int, b: int, k: int, l: int) -> Fraction:
    """Integral of the weight over the cell z in (k,k+1), z' in (l,l+1), z <= z'."""
    total = Fraction(0)
    for c, s, t in _weight_expansion(a, b):
        if l > k:
            total += c * _mono_interval(s, k, k + 1) * _mono_interval(t, l, l + 1)
        else:
            total += c * _mono_triangle(s, t, k)
    return total


def f_integral_oracle(idx: InvariantIndex, rho: RankInvariant) -> Fraction:
    """F_{a,b} by direct integration of the piecewise-constant rank function.

    Away from a null set, ``rho(z, z') = rho(floor z, ceil z')``, so the
    integral splits into unit cells.  An I-coordinate (``a_i = 1``) with
    ``z_i = z'_i`` in ``(k, k+1)`` reads the invariant at ``u_i = k,
    v_i = k+1``; a J-coordinate pair in cell ``(k, l)`` reads ``u_i = k,
    v_i = l+1`` and is integrated over ``z_i <= z'_i``.  Cell weights are
    exact polynomial integrals, so the result is an exact rational.
    """
    _check_dims(idx, rho.n)
    total = Fraction(0)
    for (u, v), val in rho.values.items():
        w = Fraction(val)
        for a, b, ui, vi in zip(idx.a, idx.b, u, v):
            if a == 1:
                if vi != ui + 1:
                    w = 0
                    break
                w *= _mono_interval(b, ui, vi)
            else:
                if vi <= ui:
                    w = 0
                    break
                w *= _cell_weight_pair(a, b, ui, vi - 1)
        total += w
    return total


# -- change of basis -------------------------------------------------------


@lru_cache(maxsize=None)
def _expansion_1d(a: int, b: int) -> tuple[tuple[int, int, Fraction], ...]:
    """1-d F_{a,b} on an interval as sum of coef * eta^alpha * xi^beta."""
    out = []
    for i in range(1, b + 2, 2):
        if a == 1:
            coef = Fraction(2 * comb(b + 1, i), (b + 1) * 2 ** (b + 1))
            out.append((i, b + 1 - i, coef))
        else:
            coef = Fraction(
                factorial(a - 2) * factorial(b), factorial(a - 1 + i) * factorial(b + 1 - i)
            )
            out.append((a - 1 + i, b + 1 - i, coef))
    return tuple(out)


def f_expansion(idx: InvariantIndex) -> dict[InvariantIndex, Fraction]:
    """F_{a,b} written in the p basis (valid on any signed cube set)."""
    per_axis = [_expansion_1d(a, b) for a, b in zip(idx.a, idx.b)]
    out: dict[InvariantIndex, Fraction] = {}
    for combo in itertools.product(*per_axis):
        key = InvariantIndex(tuple(t[0] for t in combo), tuple(t[1] for t in combo))
        coef = Fraction(1)
        for t in combo:
            coef *= t[2]
        out[key] = out.get(key, 0) + coef
    return out


def diagonal_coefficient(idx: InvariantIndex) -> Fraction:
    out = Fraction(1)
    for a, b in zip(idx.a, idx.b):
        out *= Fraction(1, 2**b) if a == 1 else Fraction(1, a * (a - 1))
    return out


@dataclass
class ChangeOfBasis:
    indices: list[InvariantIndex]
    T: list[list[Fraction]]
    T_inv: list[list[Fraction]]

    def apply(self, vec: Sequence[Fraction]) -> list[Fraction]:
        return [sum((r * v for r, v in zip(row, vec)), Fraction(0)) for row in self.T]

    def apply_inverse(self, vec: Sequence[Fraction]) -> list[Fraction]:
        return [sum((r * v for r, v in zip(row, vec)), Fraction(0)) for row in self.T_inv]


def _triangular_inverse(T: list[list[Fraction]]) -> list[list[Fraction]]:
    # T is upper triangular; solve T X = I column by column from the bottom
    m = len(T)
    inv = [[Fraction(0)] * m for _ in range(m)]
    for col in range(m):
        for row in range(m - 1, -1, -1):
            acc = Fraction(int(row == col))
            for k in range(row + 1, m):
                acc -= T[row][k] * inv[k][col]
            inv[row][col] = acc / T[row][row]
    return inv


def f_to_p_matrix(n: int, degree: int) -> ChangeOfBasis:
    """Matrix T with F-vector = T @ p-vector among indices of one degree.

    Indices are listed so that ``a`` never decreases along the list
    (a linear extension of :meth:`InvariantIndex.precedes`); F_{a,b} only
    involves p_{a',b'} with ``a' >= a``, so T is upper triangular.
    """
    indices = indices_of_degree(n, degree)
    pos = {idx: k for k, idx in enumerate(indices)}
    m = len(indices)
    T = [[Fraction(0)] * m for _ in range(m)]
    for r, idx in enumerate(indices):
        for other, coef in f_expansion(idx).items():
            T[r][pos[other]] += coef
    return ChangeOfBasis(indices, T, _triangular_inverse(T) if m else [])


# -- batch features ----------------------------------------------------------


@dataclass
class FeatureVector:
    n: int
    family: str
    entries: dict[InvariantIndex, Fraction] = field(default_factory=dict)
    provenance: dict[InvariantIndex, str] = field(default_factory=dict)

    def items(self):
        return sorted(self.entries.items(), key=lambda kv: kv[0].sort_key())

    def __getitem__(self, idx) -> Fraction:
        if not isinstance(idx, InvariantIndex):
            a, b = idx
            idx = InvariantIndex(tuple(a) if not isinstance(a, int) else (a,),
                                 tuple(b) if not isinstance(b, int) else (b,))
        return self.entries[idx]


def features_of_signed(
    X: SignedCubeSet, max_degree: int, family: Family = "p"
) -> FeatureVector:
    if max_degree < X.n:
        raise ValueError(f"max_degree must be at least n={X.n}")
    fv = FeatureVector(X.n, family)
    evaluate = p_signed if family == "p" else f_signed
    if family not in ("p", "F"):
        raise ValueError(f"unknown family {family!r}")
    for idx in indices_up_to(X.n, max_degree):
        fv.entries[idx] = evaluate(idx, X)
        fv.provenance[idx] = "closed-form"
    return fv


def feature_vector(
    module: PersistenceModule,
    max_degree: int,
    family: Family = "p",
    method: Literal["closed-form", "oracle"] = "closed-form",
) -> FeatureVector:
    """All invariants of degree ``n..max_degree``; one decomposition is shared."""
    if method == "oracle":
        if family != "F":
            raise ValueError("the integration oracle only evaluates the F family")
        if max_degree < module.n:
            raise ValueError(f"max_degree must be at least n={module.n}")
        rho = rank_table(module)
        fv = FeatureVector(module.n, family)
        for idx in indices_up_to(module.n, max_degree):
            fv.entries[idx] = f_integral_oracle(idx, rho)
            fv.provenance[idx] = "oracle"
        return fv
    return features_of_signed(module_decomposition(module), max_degree, family)
