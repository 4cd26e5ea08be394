"""Recover the summands of a positive cube set from power sums alone.

Given only sums ``S(e) = sum_i w_i prod_j f_j(M_i)^e_j`` over the hidden
summands, the largest summand (in lexicographic order of its value vector)
dominates ``S`` once the exponents grow in nested powers of ``k``; the k-th
root then isolates its values.  Peeling recovered summands off ``S`` exposes
the next one.

Everything is computed on logarithms with mpmath at a fixed working
precision.  Because the exponents are huge, subtracting the recovered
summands cancels most of the digits of ``S``; an estimate is only used while
the remainder stays above the precision floor.  Cube data is integral, so
recovered values are snapped to integers before they are subtracted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import mpmath
from mpmath import mp

from .decomposition import SignedCubeSet
from .grid import CubeSpec


class RecoveryError(ValueError):
    pass


def cube_funcs(n: int) -> tuple[str, ...]:
    """Volume, side lengths, then doubled centres."""
    return ("p10",) + tuple(f"eta{j}" for j in range(1, n + 1)) + tuple(
        f"xi{j}" for j in range(1, n + 1)
    )


def func_value(name: str, cube: CubeSpec) -> int:
    if name == "p10":
        return cube.volume
    if name.startswith("eta"):
        return cube.eta[int(name[3:]) - 1]
    if name.startswith("xi"):
        return cube.xi[int(name[2:]) - 1]
    raise ValueError(f"unknown function {name!r}")


def _summand_table(X: SignedCubeSet, funcs: Sequence[str]) -> list[tuple[tuple[int, ...], int]]:
    rows = []
    for cube, coef in X:
        if coef < 0:
            raise RecoveryError("signed sets unsupported")
        vals = tuple(func_value(f, cube) for f in funcs)
        if any(v <= 0 for v in vals):
            raise RecoveryError("recovery requires positive summand data")
        rows.append((vals, coef))
    return rows


def _log_sum(rows, exponents: Sequence[int]):
    """log sum_i w_i prod_j v_ij^e_j at the current mp precision."""
    logs = [
        mpmath.log(w) + mpmath.fsum(e * mpmath.log(v) for v, e in zip(vals, exponents) if e)
        for vals, w in rows
    ]
    if not logs:
        return mpmath.ninf
    top = max(logs)
    return top + mpmath.log(mpmath.fsum(mpmath.exp(L - top) for L in logs))


def power_sum_eval(
    X: SignedCubeSet, funcs: Sequence[str], exponents: Sequence[int], precision: int = 512
):
    """``log sum_i c_i prod_j f_j(M_i)^e_j`` as an mpf of the given precision."""
    if len(exponents) != len(funcs):
        raise ValueError("one exponent per function is required")
    if any(e < 0 for e in exponents):
        raise ValueError("exponents must be nonnegative")
    rows = _summand_table(X, funcs)
    with mp.workprec(precision):
        return +_log_sum(rows, exponents)


class PowerSumOracle:
    """Answers power-sum queries about a hidden positive cube set.

    Only :attr:`funcs`, :attr:`n` and calls are meant to be used by recovery
    code; the summands themselves stay private.
    """

    def __init__(self, X: SignedCubeSet, funcs: Sequence[str] | None = None, precision: int = 512):
        self.n = X.n
        self.funcs = tuple(funcs) if funcs is not None else cube_funcs(X.n)
        self.precision = precision
        self._rows = _summand_table(X, self.funcs)
        self.queries = 0

    def __call__(self, exponents: Sequence[int]):
        if len(exponents) != len(self.funcs):
            raise ValueError("one exponent per function is required")
        self.queries += 1
        with mp.workprec(self.precision):
            return +_log_sum(self._rows, exponents)


@dataclass(frozen=True)
class RecoverySchedule:
    k_values: tuple[int, ...] = (4, 8, 16, 32, 64)
    precision: int = 512
    tolerance: float = 1e-6
    guard_bits: int = 32

    def __post_init__(self):
        ks = tuple(int(k) for k in self.k_values)
        if not ks or any(k < 1 for k in ks) or any(a >= b for a, b in zip(ks, ks[1:])):
            raise ValueError("k_values must be a nonempty strictly increasing list of positive ints")
        object.__setattr__(self, "k_values", ks)


def limit_extrapolate(estimates: Sequence[tuple[int, float]], tolerance: float = 1e-6, eps: float = 1e-300):
    """Last estimate, and whether the last two agree to ``tolerance`` (relative)."""
    if len(estimates) < 2:
        raise ValueError("need at least two estimates")
    last = estimates[-1][1]
    prev = estimates[-2][1]
    return last, abs(last - prev) / max(abs(last), eps) < tolerance


def nested_power_log(ratios: Sequence[float], k: int):
    """log of prod_j a_j^(k^(len - j)), j counted from 0."""
    n = len(ratios)
    return mpmath.fsum(k ** (n - j) * mpmath.log(a) for j, a in enumerate(ratios))


def normalized_power_sum(weights: Sequence[float], z: Sequence[Sequence[float]], k: int):
    """sum_i w_i prod_j (z_ij / z_1j)^(k^(n-j)) for rows in decreasing lex order."""
    lead = z[0]
    n = len(lead)
    return mpmath.fsum(
        w * mpmath.exp(mpmath.fsum(k ** (n - j) * mpmath.log(mpmath.mpf(zi[j]) / lead[j]) for j in range(n)))
        for w, zi in zip(weights, z)
    )


@dataclass
class RecoveredRow:
    values: tuple  # raw estimates (mpf, or nan when recovery failed)
    snapped: tuple  # values used for peeling (ints when integral=True)
    weight: int
    converged: tuple[bool, ...]
    history: list[list[tuple[int, object]]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.converged)


def _estimate_stage(oracle, known, current, target, exps_for_k, schedule, floor_bits):
    """Run one limit over the schedule.

    ``known`` holds ``(values, weight)`` of rows already peeled off; ``current``
    maps column -> value for the row under construction.  Returns the list of
    valid ``(k, estimate)`` and the log ratio remainder / leading term at the
    last valid k (for weight estimation).
    """
    out = []
    last_log_ratio = None
    for k in schedule.k_values:
        exps = exps_for_k(k)
        log_s = oracle(exps)
        if log_s == mpmath.ninf:
            break
        peeled = mpmath.fsum(
            mpmath.exp(
                mpmath.log(w)
                + mpmath.fsum(e * mpmath.log(v) for v, e in zip(vals, exps) if e)
                - log_s
            )
            for vals, w in known
        )
        rest = 1 - peeled
        # precision floor grows with the magnitude of the logs being compared
        bits = floor_bits - max(0, int(mpmath.log(abs(log_s) + 2, 2)))
        if rest <= mpmath.ldexp(1, -bits):
            break
        log_r = log_s + mpmath.log(rest)
        log_d = mpmath.fsum(exps[j] * mpmath.log(v) for j, v in current.items() if exps[j])
        est = mpmath.exp((log_r - log_d) / exps[target])
        out.append((k, est))
        last_log_ratio = (k, log_r - log_d)
    return out, last_log_ratio


def _snap(value, integral: bool):
    if not integral:
        return value
    return max(1, int(mpmath.nint(value)))


def recover_leading_values(
    oracle: PowerSumOracle,
    m: int | None = None,
    schedule: RecoverySchedule | None = None,
    integral: bool = True,
    max_rows: int = 64,
) -> list[RecoveredRow]:
    """Recover the value vectors of the hidden summands, largest first.

    Rows come out in decreasing lexicographic order.  Summands sharing a
    value vector come back as one row with ``weight`` > 1.  When ``m`` is
    given and fewer summands exist, the missing rows are returned with nan
    values and ``converged`` all False.

    Column 0 of each row is found with exponent ``k`` on that column alone.
    If the leading value is carried by a single summand, every later column
    ``j`` uses exponents ``(k^2, k)`` on columns ``(0, j)``: the leading
    value already orders the summands, so deeper nesting only burns
    precision.  Leading values shared by several summands fall back to full
    nesting ``(k^(j+1), k^j, ..., k)`` over columns ``0..j``.
    """
    schedule = schedule or RecoverySchedule()
    J = len(oracle.funcs)
    rows: list[RecoveredRow] = []
    known: list[tuple[tuple, int]] = []
    total = 0
    floor_bits = schedule.precision - schedule.guard_bits
    limit = m if m is not None else max_rows
    with mp.workprec(schedule.precision):
        while total < limit:
            def lead_exps(k):
                return (k,) + (0,) * (J - 1)

            hist0, ratio0 = _estimate_stage(oracle, known, {}, 0, lead_exps, schedule, floor_bits)
            if not hist0:
                break
            lead = _snap(hist0[-1][1], integral)
            k0, log_ratio = ratio0
            group_weight = max(1, int(mpmath.nint(mpmath.exp(log_ratio - k0 * mpmath.log(lead)))))
            current = {0: lead}
            values = [hist0[-1][1]]
            history = [hist0]
            exp_fns = [lead_exps]
            failed = False
            last_ratio = ratio0
            last_exps_fn = lead_exps
            for j in range(1, J):
                if group_weight == 1:
                    def exps_fn(k, j=j):
                        e = [0] * J
                        e[0], e[j] = k * k, k
                        return tuple(e)
                else:
                    def exps_fn(k, j=j):
                        e = [0] * J
                        for jp in range(j + 1):
                            e[jp] = k ** (j + 1 - jp)
                        return tuple(e)
                used = {c: v for c, v in current.items() if exps_fn(1)[c]}
                hist, ratio = _estimate_stage(oracle, known, used, j, exps_fn, schedule, floor_bits)
                history.append(hist)
                exp_fns.append(exps_fn)
                if not hist:
                    failed = True
                    values.append(mpmath.nan)
                    current[j] = 1
                    continue
                values.append(hist[-1][1])
                current[j] = _snap(hist[-1][1], integral)
                last_ratio, last_exps_fn = ratio, exps_fn
            snapped = tuple(current[j] for j in range(J))
            if group_weight == 1 or failed:
                weight = group_weight if failed else 1
            else:
                k_last, log_r_over_d = last_ratio
                exps = last_exps_fn(k_last)
                target = max(j for j in range(J) if exps[j] == k_last)
                log_t = exps[target] * mpmath.log(snapped[target])
                weight = max(1, int(mpmath.nint(mpmath.exp(log_r_over_d - log_t))))
            if weight > 1:
                # raw estimates carry a factor weight^(1/exponent)
                history = [
                    [(k, est / mpmath.root(weight, exp_fns[j](k)[j])) for k, est in hist]
                    for j, hist in enumerate(history)
                ]
                values = [h[-1][1] if h else mpmath.nan for h in history]
            converged = []
            for hist in history:
                if len(hist) >= 2:
                    converged.append(limit_extrapolate(hist, schedule.tolerance)[1])
                else:
                    converged.append(False)
            rows.append(RecoveredRow(tuple(values), snapped, weight, tuple(converged), history))
            known.append((snapped, weight))
            total += weight
    if m is not None:
        while total < m:
            rows.append(
                RecoveredRow((mpmath.nan,) * J, (None,) * J, 1, (False,) * J, [])
            )
            total += 1
    return rows


@dataclass
class RecoveredCube:
    cube: CubeSpec | None
    multiplicity: int
    volume: object
    eta: tuple
    xi: tuple
    exact: bool
    converged: bool


def recover_cubes(
    oracle: PowerSumOracle, schedule: RecoverySchedule | None = None, max_summands: int = 64
) -> list[RecoveredCube]:
    """Recover every cube (with multiplicity) from a cube-function oracle."""
    n = oracle.n
    if tuple(oracle.funcs) != cube_funcs(n):
        raise ValueError(f"oracle must expose {cube_funcs(n)}")
    out = []
    for row in recover_leading_values(oracle, None, schedule, integral=True, max_rows=max_summands):
        vol = row.values[0]
        eta = row.values[1 : n + 1]
        xi = row.values[n + 1 :]
        exact = not any(mpmath.isnan(v) for v in row.values)
        cube = None
        if exact:
            xs_hat = [(s - e) / 2 for e, s in zip(eta, xi)]
            ys_hat = [(s + e) / 2 for e, s in zip(eta, xi)]
            xs = [int(mpmath.nint(v)) for v in xs_hat]
            ys = [int(mpmath.nint(v)) for v in ys_hat]
            exact = all(abs(h - r) < 0.5 for h, r in zip(xs_hat + ys_hat, xs + ys))
            e_snap = row.snapped[1 : n + 1]
            s_snap = row.snapped[n + 1 :]
            exact = exact and all((s - e) % 2 == 0 for e, s in zip(e_snap, s_snap))
            exact = exact and math.prod(e_snap) == row.snapped[0]
            if all(a <= b for a, b in zip(xs, ys)):
                cube = CubeSpec(tuple(xs), tuple(ys))
            else:
                exact = False
        out.append(
            RecoveredCube(cube, row.weight, vol, tuple(eta), tuple(xi), exact, row.ok)
        )
    return out
