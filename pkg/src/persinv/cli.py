"""Command-line interface.

Exit codes: 0 success, 2 malformed input, 3 semantic violation (invalid
module, unsupported data).  ``check-algebra`` exits 1 when a check fails.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

import mpmath

from . import algebra, formats
from .core import InvalidModuleError, rank_table, validate
from .decomposition import NotRankInvariantError, SignedCubeSet, decompose, reconstruct
from .grid import CubeSpec
from .invariants import features_of_signed, feature_vector
from .recovery import PowerSumOracle, RecoveryError, RecoverySchedule, recover_cubes
from .sampling import random_cube_list, random_general_module

EXIT_OK, EXIT_FAIL, EXIT_FORMAT, EXIT_SEMANTIC = 0, 1, 2, 3


class SemanticError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load_module(path: str):
    module = formats.module_from_json(formats.read_json(path))
    report = validate(module)
    if not report.ok:
        lines = [f"{v.kind} at {v.point} axes {v.axes}: {v.detail}" for v in report]
        raise SemanticError("invalid module\n" + "\n".join(lines))
    return module


def cmd_validate(args) -> int:
    module = formats.module_from_json(formats.read_json(args.path))
    report = validate(module)
    if report.ok:
        print("valid")
        return EXIT_OK
    for v in report:
        print(f"{v.kind}\tpoint={formats.point_key(v.point)}\taxes={list(v.axes)}\t{v.detail}")
    return EXIT_SEMANTIC


def cmd_rank_table(args) -> int:
    rho = rank_table(_load_module(args.path))
    _emit(formats.dumps(formats.rank_invariant_to_json(rho)), args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    doc = formats.read_json(args.path)
    if "values" in doc:
        rho = formats.rank_invariant_from_json(doc)
    else:
        module = formats.module_from_json(doc)
        if not validate(module).ok:
            raise SemanticError("invalid module")
        rho = rank_table(module)
    X = decompose(rho)
    if args.reduce_degenerate:
        X = X.reduce_degenerate()
    _emit(formats.dumps(formats.cubeset_to_json(X, rho.box)), args.out)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    X, box = formats.cubeset_from_json(formats.read_json(args.path))
    if box is None:
        if not len(X):
            raise SemanticError("an empty cube set needs an explicit box")
        box = X.bounding_box()
    try:
        rho = reconstruct(X, box)
    except ValueError as exc:
        raise SemanticError(str(exc)) from None
    _emit(formats.dumps(formats.rank_invariant_to_json(rho)), args.out)
    return EXIT_OK


def cmd_features(args) -> int:
    doc = formats.read_json(args.path)
    families = ["F", "p"] if args.family == "both" else [args.family]
    if "terms" in doc:
        X, _ = formats.cubeset_from_json(doc)
        vectors = [features_of_signed(X, args.max_degree, fam) for fam in families]
    else:
        module = _load_module(args.path)
        vectors = [feature_vector(module, args.max_degree, fam) for fam in families]
    text = formats.features_to_csv(vectors) if args.format == "csv" else formats.features_to_json(vectors)
    _emit(text, args.out)
    return EXIT_OK


def _shift_cubes(X: SignedCubeSet, offset: Sequence[int]) -> SignedCubeSet:
    return SignedCubeSet.from_terms(
        X.n,
        [
            (CubeSpec(tuple(a + s for a, s in zip(c.x, offset)), tuple(b + s for b, s in zip(c.y, offset))), k)
            for c, k in X.terms.items()
        ],
    )


def cmd_recover(args) -> int:
    doc = formats.read_json(args.path)
    X, _ = formats.cubeset_from_json(doc) if "terms" in doc else (None, None)
    if X is None:
        X = decompose(rank_table(_load_module(args.path)))
    if not X.is_positive():
        raise SemanticError("signed sets unsupported")
    stripped = sum(k for c, k in X.terms.items() if c.is_degenerate)
    X = X.reduce_degenerate()
    offset = [0] * X.n
    if args.shift_positive and len(X):
        offset = [max(0, 1 - min(c.x[j] for c in X.terms)) for j in range(X.n)]
        X = _shift_cubes(X, offset)
    try:
        oracle = PowerSumOracle(X, precision=args.precision_bits)
    except RecoveryError as exc:
        raise SemanticError(f"{exc} (try --shift-positive)") from None
    ks = tuple(k for k in (4, 8, 16, 32, 64, 128, 256) if k <= args.kmax) or (args.kmax,)
    if ks[-1] != args.kmax:
        ks = ks + (args.kmax,)
    schedule = RecoverySchedule(ks, args.precision_bits, args.tolerance)
    cubes = []
    for rc in recover_cubes(oracle, schedule):
        entry = {
            "x": list(a - s for a, s in zip(rc.cube.x, offset)) if rc.cube else None,
            "y": list(b - s for b, s in zip(rc.cube.y, offset)) if rc.cube else None,
            "mult": rc.multiplicity,
            "exact": rc.exact,
            "converged": rc.converged,
            "volume_estimate": mpmath.nstr(rc.volume, 20),
        }
        cubes.append(entry)
    out = {
        "n": X.n,
        "shift": offset,
        "stripped_degenerate": stripped,
        "schedule": {"k_values": list(ks), "precision_bits": args.precision_bits, "tolerance": args.tolerance},
        "cubes": cubes,
    }
    _emit(formats.dumps(out), args.out)
    return EXIT_OK


def algebra_report(n: int, max_degree: int) -> list[tuple[str, bool]]:
    rows = []
    hs = algebra.hilbert_product_coeffs(n, max_degree)
    for d in range(max_degree + 1):
        rows.append((f"hilbert n={n} d={d}: {algebra.free_algebra_dim(n, d)} == {hs[d]}",
                     algebra.free_algebra_dim(n, d) == hs[d]))
    for d in range(max_degree + 1):
        brute = len(algebra.brute_force_generators(n, d)) if d >= n else 0
        rows.append((f"generators n={n} d={d}: {algebra.count_generators(n, d)} == {brute}",
                     algebra.count_generators(n, d) == brute))
    for d in range(min(max_degree, 6) + 1):
        dims = {algebra.count_admissible_orbits(n, m, d) for m in (d, d + 1)}
        want = algebra.free_algebra_dim(n, d)
        rows.append((f"orbits n={n} d={d}: {sorted(dims)} == {want}", dims == {want}))
    pascal = all(algebra.pascal_identity_check(x, k) for x in range(1, 13) for k in range(13))
    rows.append(("pascal identity x,k <= 12", pascal))
    return rows


def cmd_check_algebra(args) -> int:
    rows = algebra_report(args.n, args.max_degree)
    for label, ok in rows:
        print(f"{'PASS' if ok else 'FAIL'}\t{label}")
    return EXIT_OK if all(ok for _, ok in rows) else EXIT_FAIL


def cmd_gen_random(args) -> int:
    import random

    rng = random.Random(args.seed)
    if args.general:
        doc = formats.module_to_json(random_general_module(rng, args.n, args.box, args.max_dim))
    else:
        doc = formats.cubes_to_module_json(args.n, random_cube_list(rng, args.n, args.box, args.cubes))
    _emit(formats.dumps(doc), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="persinv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check shapes and commutativity of a module file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("rank-table", help="rank invariant of a module")
    p.add_argument("path")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_rank_table)

    p = sub.add_parser("decompose", help="signed cube decomposition of a module or rank table")
    p.add_argument("path")
    p.add_argument("-o", "--out")
    p.add_argument("--reduce-degenerate", action="store_true", help="drop zero-volume cubes (lossy)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("reconstruct", help="rank table of a signed cube set")
    p.add_argument("path")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("features", help="exact F and/or p invariants")
    p.add_argument("path")
    p.add_argument("--family", choices=["F", "p", "both"], default="both")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("recover", help="recover cubes from power sums of a positive cube set")
    p.add_argument("path")
    p.add_argument("--kmax", type=int, default=64)
    p.add_argument("--precision-bits", type=int, default=512)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--shift-positive", action="store_true")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("check-algebra", help="verify the generator and Hilbert series counts")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--max-degree", type=int, default=10)
    p.set_defaults(func=cmd_check_algebra)

    p = sub.add_parser("gen-random", help="write a random module file")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--box", type=int, default=4, help="side length of the grid")
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--cubes", type=int, default=3, help="maximum number of cube summands")
    kind.add_argument("--general", action="store_true", help="twisted sum of interval modules")
    p.add_argument("--max-dim", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen_random)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except formats.FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (SemanticError, InvalidModuleError, NotRankInvariantError, RecoveryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
