"""Command-line front end.

Subcommands: ``triangularize``, ``verify``, ``spectrum``, ``closure``, ``random``.

Exit codes: 0 triangularizable (or success), 1 refuted, 2 input error,
3 resource bound exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from .closure import DEFAULT_CLOSURE_BOUND, GeneratorSet, semigroup_closure
from .fileformat import (
    DEFAULT_MAX_PRIME,
    MODES,
    FamilyFile,
    FileFormatError,
    format_chain,
    format_family,
    parse_chain,
    parse_family,
)
from .linalg import (
    central_spectrum_quaternion,
    char_poly,
    eigenvalues_in_field,
    is_nilpotent,
    is_unipotent,
    rational_eigenvalues_quaternion,
    singleton_spectrum,
)
from .poly import format_poly
from .testkit import KINDS, InstanceRecipe, RetriesExhausted, gen_conjugated_flag_family, gen_tn_family
from .triangularize import (
    ClosureBoundExceeded,
    InvalidTnFamily,
    IrreducibilityUndecided,
    TnFamily,
    Verdict,
    irreducibility_test,
    kaplansky_chain,
    kaplansky_scalar,
    kolchin_chain,
    levitzki_chain,
    spin,
    tn_triangularize,
    triangularize_general,
    verify_chain,
)

__all__ = ["main", "choose_engine", "run_family", "EXIT_OK", "EXIT_REFUTED", "EXIT_INPUT", "EXIT_BOUND"]

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INPUT = 2
EXIT_BOUND = 3


class _InputError(Exception):
    pass


def choose_engine(gens):
    """Most specific engine whose hypothesis the generators satisfy."""
    mats = gens.matrices
    if all(is_nilpotent(g) for g in mats):
        return "levitzki"
    if all(is_unipotent(g) for g in mats):
        return "kolchin"
    if all(kaplansky_scalar(g) is not None for g in mats):
        return "kaplansky"
    if not gens.ring.is_commutative:
        # no general engine over the quaternions; Kaplansky's search names the obstruction
        return "kaplansky"
    return "general"


_ENGINES = {
    "levitzki": levitzki_chain,
    "kolchin": kolchin_chain,
    "kaplansky": kaplansky_chain,
    "general": triangularize_general,
}


def _irreducible_verdict(gens):
    n, ring = gens.n, gens.ring
    irreducible = irreducibility_test(gens)
    if irreducible and n >= 2:
        return "irreducible", None
    for i in range(n):
        e = [ring.one if k == i else ring.zero for k in range(n)]
        U = spin([e], gens.matrices, n, ring)
        if U.dim < n:
            return "reducible", U
    return "reducible", None


def run_family(ff, mode=None, closure_bound=None, finite=None):
    """Decide a parsed family file; returns a :class:`Verdict` or raises."""
    mode = mode or ff.mode
    if mode == "irreducible":
        mode = "auto"
    bound = closure_bound or ff.closure_bound or DEFAULT_CLOSURE_BOUND
    finite = ff.finite if finite is None else finite
    if mode == "tn":
        if not ff.tn_pairs:
            raise _InputError("mode 'tn' requires tn_pairs in the family file")
        try:
            fam = TnFamily(ff.tn_pairs)
        except InvalidTnFamily as e:
            return Verdict(False, witness=e.witness, engine="tn", notes=["rejected at construction"])
        return tn_triangularize(fam, bound, finite)
    gens = GeneratorSet(ff.generators)
    notes = []
    if finite:
        res = semigroup_closure(gens, bound)
        if not res.complete:
            raise ClosureBoundExceeded(bound)
        notes.append(f"finite semigroup of {len(res.elements)} elements")
    engine = choose_engine(gens) if mode == "auto" else mode
    verdict = _ENGINES[engine](gens, closure_bound=bound)
    verdict.notes = notes + verdict.notes
    return verdict


# ---------------------------------------------------------------------------
# reports


def _vec(v, ring):
    return "(" + ", ".join(ring.format(a) for a in v) + ")"


def _report_text(verdict, ring):
    out = [f"{verdict.kind} (engine: {verdict.engine})"]
    if verdict.log:
        out.append("proof path:")
        out.extend(f"  {s}" for s in verdict.log)
    if verdict.triangularizable:
        out.append("chain:")
        for j, V in enumerate(verdict.chain.subspaces[1:], 1):
            out.append(f"  V_{j} = span{{{', '.join(_vec(b, ring) for b in V.basis)}}}")
    else:
        w = verdict.witness
        out.append(f"witness: {w.describe()}")
        out.extend("  " + line for line in w.element.pretty().splitlines())
        for T in w.operands:
            out.append("  operand:")
            out.extend("    " + line for line in T.pretty().splitlines())
    for note in verdict.notes:
        out.append(f"note: {note}")
    return "\n".join(out)


def _report_json(verdict):
    d = {"verdict": verdict.kind, "engine": verdict.engine, "steps": [
        {"depth": s.depth, "dim": s.dim, "branch": s.branch, "found": s.found, "note": s.note} for s in verdict.log
    ], "notes": list(verdict.notes)}
    if verdict.triangularizable:
        d["chain"] = [V.to_strings() for V in verdict.chain.subspaces[1:]]
    else:
        w = verdict.witness
        d["witness"] = {"kind": w.kind, "word": w.word, "detail": w.detail, "element": w.element.to_strings(),
                        "recheck": w.recheck()}
    return json.dumps(d, indent=2)


# ---------------------------------------------------------------------------
# subcommands


def _read(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _InputError(f"cannot read {path}: {e.strerror}") from None


def _load_family(args):
    if not args.input:
        raise _InputError("--input is required")
    return parse_family(_read(args.input), args.max_prime)


def _generators(ff):
    if ff.mode == "tn" and ff.tn_pairs:
        return GeneratorSet([T + N for T, N in ff.tn_pairs])
    return GeneratorSet(ff.generators)


def cmd_triangularize(args, out):
    ff = _load_family(args)
    mode = args.mode
    if mode == "irreducible" or (mode is None and ff.mode == "irreducible"):
        gens = _generators(ff)
        state, U = _irreducible_verdict(gens)
        if state == "irreducible":
            print("NotTriangularizable: the family is irreducible "
                  "(no common invariant subspace besides 0 and the whole space)", file=out)
            return EXIT_REFUTED
        print("reducible" + (f": invariant subspace span{{{', '.join(_vec(b, gens.ring) for b in U.basis)}}}"
                             if U is not None else ""), file=out)
        mode = "auto"
    verdict = run_family(ff, mode, args.closure_bound, True if args.finite else None)
    ring = ff.ring
    print(_report_json(verdict) if args.json else _report_text(verdict, ring), file=out)
    if verdict.triangularizable and args.emit_chain:
        with open(args.emit_chain, "w", encoding="utf-8") as fh:
            fh.write(format_chain(verdict.chain))
    return EXIT_OK if verdict.triangularizable else EXIT_REFUTED


def cmd_verify(args, out):
    ff = _load_family(args)
    if not args.chain:
        raise _InputError("--chain is required")
    chain = parse_chain(_read(args.chain), args.max_prime)
    gens = _generators(ff)
    if chain.n != gens.n or chain.ring != gens.ring:
        raise _InputError("chain and family differ in dimension or scalar ring")
    report = verify_chain(gens, chain)
    print(("OK: " if report else "FAIL: ") + report.describe(gens.labels), file=out)
    return EXIT_OK if report else EXIT_REFUTED


def _set(vals, fmt):
    return "{" + ",".join(fmt(v) for v in vals) + "}"


def _spectrum_line(A):
    ring = A.ring
    if not ring.is_commutative:
        c = central_spectrum_quaternion(A)
        if c is not None:
            return f"central {ring.center.format(c)}"
        return f"none (rational eigenvalues {_set(rational_eigenvalues_quaternion(A), ring.center.format)})"
    lam = singleton_spectrum(A)
    if lam is not None:
        return f"singleton {ring.format(lam)}"
    pairs, split = eigenvalues_in_field(A)
    s = f"none (spectrum {_set([r for r, _ in pairs], ring.format)})"
    if not split:
        s = s[:-1] + f"; char poly {format_poly(char_poly(A), ring.format)} does not split)"
    return s


def cmd_spectrum(args, out):
    ff = _load_family(args)
    gens = _generators(ff)
    for label, g in zip(gens.labels, gens.matrices):
        print(f"{label}: {_spectrum_line(g)}", file=out)
    return EXIT_OK


def cmd_closure(args, out):
    ff = _load_family(args)
    bound = args.closure_bound or ff.closure_bound or DEFAULT_CLOSURE_BOUND
    res = semigroup_closure(_generators(ff), bound)
    state = "complete" if res.complete else f"incomplete (bound {bound} reached)"
    print(f"closure size {len(res.elements)}, {state}", file=out)
    return EXIT_OK


def cmd_random(args, out):
    if args.n is None or args.kind is None:
        raise _InputError("--kind and --n are required")
    try:
        recipe = InstanceRecipe(args.kind, args.n, args.scalar, args.seed, args.gens)
        ring = recipe.scalar_ring
    except ValueError as e:
        raise _InputError(str(e)) from None
    if ring.characteristic > args.max_prime:
        raise _InputError(f"prime exceeds --max-prime {args.max_prime}")
    try:
        if recipe.kind == "tn":
            fam, _ = gen_tn_family(recipe)
            ff = FamilyFile(ring.tag(), recipe.n, fam.generators().matrices, "tn", list(fam.pairs))
        else:
            gens, _ = gen_conjugated_flag_family(recipe)
            mode = "irreducible" if recipe.kind == "irreducible_pair" else "auto"
            ff = FamilyFile(ring.tag(), recipe.n, gens.matrices, mode)
    except (ValueError, RetriesExhausted) as e:
        raise _InputError(str(e)) from None
    text = format_family(ff)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    parser = argparse.ArgumentParser(prog="semitri", description="Exact simultaneous triangularization of matrix semigroups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", metavar="PATH", help="family file (JSON); '-' reads stdin")
        p.add_argument("--max-prime", type=int, default=DEFAULT_MAX_PRIME, help="largest accepted GF(p) modulus")

    p = sub.add_parser("triangularize", help="decide and print a chain or a witness")
    common(p)
    p.add_argument("--mode", choices=MODES, help="override the file's mode")
    p.add_argument("--closure-bound", type=int, metavar="K", help=f"closure size limit (default {DEFAULT_CLOSURE_BOUND})")
    p.add_argument("--finite", action="store_true", help="require the semigroup to be finite within the bound")
    p.add_argument("--emit-chain", metavar="PATH", help="write the chain file here on success")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_triangularize)

    p = sub.add_parser("verify", help="check a chain file against a family")
    common(p)
    p.add_argument("--chain", metavar="PATH", help="chain file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("spectrum", help="singleton or central spectrum of each generator")
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("closure", help="size and completeness of the semigroup closure")
    common(p)
    p.add_argument("--closure-bound", type=int, metavar="K")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("random", help="write a seeded random family file")
    p.add_argument("--kind", choices=KINDS)
    p.add_argument("--n", type=int)
    p.add_argument("--scalar", default="rational", help="rational, gfp:<p> or quaternion")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gens", type=int, default=2, help="number of generators")
    p.add_argument("--output", metavar="PATH")
    p.add_argument("--max-prime", type=int, default=DEFAULT_MAX_PRIME)
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if getattr(args, "closure_bound", None) is not None and args.closure_bound < 1:
        print("error: --closure-bound must be positive", file=err)
        return EXIT_INPUT
    try:
        return args.func(args, out)
    except FileFormatError as e:
        print(f"input error: {e}", file=err)
        return EXIT_INPUT
    except _InputError as e:
        print(f"input error: {e}", file=err)
        return EXIT_INPUT
    except ClosureBoundExceeded as e:
        print(f"resource bound: {e}", file=err)
        return EXIT_BOUND
    except IrreducibilityUndecided as e:
        print(f"resource bound: irreducibility test undecided ({e})", file=err)
        return EXIT_BOUND


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
