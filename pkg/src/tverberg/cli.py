"""Command-line interface: ``tverberg <command> ...``.

Exit codes: 0 success/found, 1 valid run but nothing found (or an invalid
witness), 2 input error.  Output files are only written on success.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
import time

from . import documents as docs
from .generate import PROFILES, generate
from .kernel import common_point
from .model import ColoringKind, Instance
from .plot import render_svg
from .reduction import (
    AssertionBreach,
    InvalidColoring,
    lift_instance,
    plan_lift,
    pullback_with_audit,
    round_trip,
    verify_reduction,
)
from .solver import SearchConfig, solve, solve_all

log = logging.getLogger("tverberg")

EXIT_OK, EXIT_NOT_FOUND, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _instance(path: str) -> tuple[Instance, dict]:
    try:
        return docs.parse_instance(_read(path))
    except docs.DocumentError as exc:
        raise InputError(f"{path}: {exc}") from None


def _witnesses(path: str):
    try:
        return docs.parse_witnesses(_read(path))
    except docs.DocumentError as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        docs.write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _config(args) -> SearchConfig:
    return SearchConfig(
        require_all_vertices_used=args.use_all_vertices,
        max_solutions=args.limit,
        prune_with_prefix_lp=not args.no_prune,
        workers=args.parallel,
    )


def _check_compatible(instance: Instance, witness, path: str) -> None:
    if len(witness.point) != instance.d:
        raise InputError(f"{path}: point has {len(witness.point)} coordinates, instance has d={instance.d}")
    for i, face in enumerate(witness.faces):
        for v in face:
            if not 0 <= v < instance.num_vertices:
                raise InputError(
                    f"{path}: faces[{i}] uses vertex {v} but the instance has {instance.num_vertices} vertices"
                )
    for i, coeffs in enumerate(witness.coefficients):
        for v in coeffs:
            if not 0 <= v < instance.num_vertices:
                raise InputError(f"{path}: coefficients[{i}] uses vertex {v} outside the instance")


def cmd_gen(args) -> int:
    try:
        instance, meta = generate(args.d, args.r, args.profile, args.seed, args.bound)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(docs.dump_instance(instance, meta), args.output)
    return EXIT_OK


def cmd_solve(args) -> int:
    if args.all:
        return cmd_solve_all(args)
    instance, _ = _instance(args.instance)
    witness = solve(instance, _config(args))
    if witness is None:
        print("no family of rainbow faces with a common point", file=sys.stderr)
        return EXIT_NOT_FOUND
    _emit(docs.dump_witness(witness), args.output)
    if args.output:
        print(f"faces {[list(f) for f in witness.faces]} meet at ({', '.join(map(str, witness.point))})")
    return EXIT_OK


def cmd_solve_all(args) -> int:
    instance, _ = _instance(args.instance)
    witnesses = solve_all(instance, _config(args))
    if not witnesses:
        print("no family of rainbow faces with a common point", file=sys.stderr)
        return EXIT_NOT_FOUND
    _emit(docs.dump_witnesses(witnesses), args.output)
    if args.output:
        print(f"{len(witnesses)} witness(es)")
    return EXIT_OK


def _plan(instance: Instance):
    try:
        return plan_lift(instance.coloring, instance.d, instance.r)
    except InvalidColoring as exc:
        raise InputError(f"invalid coloring: {exc}") from None


def cmd_lift(args) -> int:
    instance, meta = _instance(args.instance)
    plan = _plan(instance)
    lifted = lift_instance(instance, plan)
    lift_meta = {
        "lifted_from": meta or {},
        "final_D": plan.final_D,
        "final_N": plan.final_N,
        "batches": [list(s.batch) for s in plan.steps],
        "target_axes": [s.target_axis for s in plan.steps],
    }
    _emit(docs.dump_instance(lifted, {"lift": lift_meta}), args.output)
    print(plan.summary(), file=sys.stderr if not args.output else sys.stdout)
    return EXIT_OK


def cmd_pullback(args) -> int:
    instance, _ = _instance(args.instance)
    plan = _plan(instance)
    lifted = lift_instance(instance, plan)
    found = _witnesses(args.witness)
    if not found:
        raise InputError(f"{args.witness}: no witness in document")
    lifted_witness = found[0]
    _check_compatible(lifted, lifted_witness, args.witness)
    if not lifted_witness.is_valid(lifted):
        print("lifted witness is not valid for the lifted instance", file=sys.stderr)
        return EXIT_NOT_FOUND
    try:
        witness, audits = pullback_with_audit(lifted_witness, lifted, plan, instance)
    except AssertionBreach as exc:
        print(f"ASSERTION BREACH: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    for audit in audits:
        print(audit)
    _emit(docs.dump_witness(witness), args.output)
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    instance, _ = _instance(args.instance)
    verdict = instance.classify()
    if verdict.kind is ColoringKind.INVALID:
        raise InputError(f"invalid coloring: {verdict.reason}")
    print(f"coloring: {verdict.kind.value}, class sizes {list(instance.coloring.sizes)}")
    try:
        result = round_trip(instance, _config(args))
    except AssertionBreach as exc:
        print(f"ASSERTION BREACH: {exc}")
        return EXIT_NOT_FOUND
    print(result.plan.summary())
    if result.lifted_witness is None:
        print("lifted instance: no witness found")
        print("verdict: FAILED")
        return EXIT_NOT_FOUND
    print(f"lifted witness faces: {[list(f) for f in result.lifted_witness.faces]}")
    print(f"layers peeled: {len(result.audits)}")
    for audit in result.audits:
        print(f"  {audit}")
    w = result.witness
    print(f"pulled-back faces: {[list(f) for f in w.faces]}, point ({', '.join(map(str, w.point))})")
    print(f"verdict: {'VERIFIED' if result.verified else 'FAILED'}")
    if not result.verified:
        return EXIT_NOT_FOUND
    if args.output:
        docs.write_atomic(args.output, docs.dump_witness(w))
    return EXIT_OK


def cmd_verify(args) -> int:
    instance, _ = _instance(args.instance)
    witnesses = _witnesses(args.witness)
    for w in witnesses:
        _check_compatible(instance, w, args.witness)
    bad = [i for i, w in enumerate(witnesses) if not verify_reduction(instance, w)]
    if bad:
        print(f"invalid witness(es): {bad}")
        return EXIT_NOT_FOUND
    print(f"valid ({len(witnesses)} witness(es))")
    return EXIT_OK


def cmd_plot(args) -> int:
    instance, _ = _instance(args.instance)
    if instance.d != 2:
        raise InputError("plot requires d=2")
    witness = None
    if args.witness:
        witness = _witnesses(args.witness)[0]
        _check_compatible(instance, witness, args.witness)
    docs.write_atomic(args.output, render_svg(instance, witness))
    return EXIT_OK


def selftest() -> bool:
    """Quick end-to-end smoke checks; prints one PASS/FAIL line each."""
    checks = []

    def check(name):
        def deco(fn):
            checks.append((name, fn))
            return fn
        return deco

    @check("radon square")
    def _():
        inst = Instance.build(2, 2, [(0, 0), (2, 0), (2, 2), (0, 2)], [0, 1, 2, 3])
        w = solve(inst)
        return w is not None and w.faces == ((0, 2), (1, 3)) and w.point == (1, 1)

    @check("tverberg 7 moment-curve points")
    def _():
        inst = Instance.build(2, 3, [(t, t * t) for t in range(1, 8)], range(7))
        w = solve(inst)
        return w is not None and verify_reduction(inst, w)

    @check("tightness 6 moment-curve points")
    def _():
        return solve(Instance.build(2, 3, [(t, t * t) for t in range(1, 7)], range(6))) is None

    @check("reduction round trip d=1 r=3 singletons")
    def _():
        inst = Instance.build(1, 3, [(0,), (1,), (2,), (3,), (4,)], range(5))
        res = round_trip(inst)
        return res.verified and len(res.audits) == 3

    @check("segment intersection oracle")
    def _():
        rng = random.Random(0)
        for _ in range(50):
            ends = [rng.randint(-5, 5) for _ in range(6)]
            inst = Instance.build(1, 3, [(x,) for x in ends], range(6))
            segs = [(min(ends[i], ends[i + 1]), max(ends[i], ends[i + 1])) for i in (0, 2, 4)]
            meets = max(a for a, _ in segs) <= min(b for _, b in segs)
            if (common_point([(0, 1), (2, 3), (4, 5)], inst) is not None) != meets:
                return False
        return True

    ok = True
    for name, fn in checks:
        t0 = time.perf_counter()
        passed = bool(fn())
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}  ({time.perf_counter() - t0:.2f}s)")
    return ok


def cmd_selftest(args) -> int:
    return EXIT_OK if selftest() else EXIT_NOT_FOUND


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tverberg", description="Colored Tverberg solver and reduction pipeline.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def search_flags(p):
        p.add_argument("--limit", type=int, default=None, help="stop after this many witnesses")
        p.add_argument("--parallel", type=int, default=1, metavar="N", help="worker processes")
        p.add_argument("--no-prune", action="store_true", help="disable the prefix-LP prune")
        p.add_argument("--use-all-vertices", action="store_true", help="faces must cover every vertex")

    p = sub.add_parser("gen", help="generate a seeded instance")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--profile", choices=PROFILES, default="singletons")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, default=100)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="find the first witness in canonical order")
    p.add_argument("instance")
    p.add_argument("--all", action="store_true", help="list every witness (as solve-all)")
    search_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("solve-all", help="list witnesses in canonical order")
    p.add_argument("instance")
    search_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve_all)

    p = sub.add_parser("lift", help="lift a general coloring to a special one")
    p.add_argument("instance")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("pullback", help="pull a lifted witness back to the original instance")
    p.add_argument("instance", help="the original instance")
    p.add_argument("witness", help="a witness for the lifted instance")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_pullback)

    p = sub.add_parser("roundtrip", help="lift, solve, pull back and verify")
    p.add_argument("instance")
    search_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("verify", help="check a witness against an instance")
    p.add_argument("instance")
    p.add_argument("witness")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="SVG picture of a planar instance")
    p.add_argument("instance")
    p.add_argument("witness", nargs="?")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("selftest", help="run quick built-in checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    for flag in ("limit", "parallel"):
        value = getattr(args, flag, None)
        if value is not None and value < 1:
            print(f"error: --{flag} must be at least 1", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
