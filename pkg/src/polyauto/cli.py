"""Command-line interface.

Subcommands: classify, compose, invert, jacobian, vd, exp, certify, verify,
identities.  Inputs are the text forms documented in docs/formats.md; reports
are deterministic (byte-identical across runs with the same inputs/flags).

Exit codes: 0 success/PASS, 1 domain error or FAIL, 2 INDETERMINATE or
usage problems.
"""

from __future__ import annotations

import argparse
import sys

from .autos import (Endo, FactoredAuto, Linear, Translation, affine_parts,
                    classify, compose, invert_endo, jacobian_det,
                    vector_degree)
from .certificates import (parse_certificate, serialize_certificate,
                           verify_certificate)
from .cotame import certify_normally_cotame
from .errors import AlgebraError, NotStructured
from .identities import run_identity_suite, summarize
from .poly import DEFAULT_DEGREE_CAP
from .textio import (endo_to_text, factored_to_text, parse_automorphism,
                     parse_derivation, parse_field, parse_polynomial,
                     poly_to_text)


def _as_endo(obj, cap) -> Endo:
    if isinstance(obj, FactoredAuto):
        return obj.expand(cap=cap)
    return obj


def word_from_endo(phi: Endo) -> FactoredAuto:
    """Wrap a structured expanded map as a one- or two-factor word."""
    field, n = phi.field, phi.nvars
    from .autos import elementary_parts, Elementary, triangular_parts, Triangular
    ep = elementary_parts(phi)
    if ep is not None:
        return FactoredAuto(field, n, [Elementary(field, n, ep[0], ep[1])])
    tp = triangular_parts(phi)
    if tp is not None:
        return FactoredAuto(field, n, [Triangular(field, n, tp[0], tp[1])])
    ap = affine_parts(phi)
    if ap is not None:
        A, b = ap
        factors = []
        if any(not x.is_zero() for x in b):
            factors.append(Translation(field, n, b))
        factors.append(Linear(field, n, A))
        return FactoredAuto(field, n, factors)
    raise NotStructured(
        "expanded input is not affine/elementary/triangular; "
        "pass a factored word instead")


def cmd_classify(args) -> int:
    obj = parse_automorphism(args.map)
    phi = _as_endo(obj, args.cap)
    flags = classify(phi)
    for name in ("identity", "translation", "linear", "affine",
                 "diagonal_affine", "elementary", "triangular",
                 "parabolic", "special"):
        print(f"{name}: {'yes' if getattr(flags, name) else 'no'}")
    return 0


def cmd_compose(args) -> int:
    a = _as_endo(parse_automorphism(args.left), args.cap)
    b = _as_endo(parse_automorphism(args.right), args.cap)
    print(endo_to_text(compose(a, b, cap=args.cap)))
    return 0


def cmd_invert(args) -> int:
    obj = parse_automorphism(args.map)
    if isinstance(obj, FactoredAuto):
        inv = obj.inverse()
        print(f"[{inv.field.tag()},{inv.nvars}] {factored_to_text(inv)}")
    else:
        print(endo_to_text(invert_endo(obj, cap=args.cap)))
    return 0


def cmd_jacobian(args) -> int:
    phi = _as_endo(parse_automorphism(args.map), args.cap)
    print(poly_to_text(jacobian_det(phi)))
    return 0


def cmd_vd(args) -> int:
    phi = _as_endo(parse_automorphism(args.map), args.cap)
    vd = vector_degree(phi)
    print("(" + ",".join(str(d) for d in vd) + ")")
    return 0


def cmd_exp(args) -> int:
    from .lnd import exp_automorphism
    field = parse_field(args.field)
    F = parse_polynomial(args.kernel, field, args.nvars)
    D = parse_derivation(args.derivation, field, args.nvars)
    print(endo_to_text(exp_automorphism(F, D)))
    return 0


def cmd_certify(args) -> int:
    from . import reduce_core
    obj = parse_automorphism(args.map)
    if isinstance(obj, Endo):
        obj = word_from_endo(obj)
    reduce_core.PROBE_BOUND_OVERRIDE = args.probe_bound
    try:
        cert = certify_normally_cotame(obj, cap=args.cap)
    finally:
        reduce_core.PROBE_BOUND_OVERRIDE = None
    text = serialize_certificate(cert)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"certificate written to {args.out}")
    else:
        sys.stdout.write(text)
    print(f"path: {cert.meta.get('path', '?')}  steps: {len(cert.steps)}  "
          f"terminal: {cert.terminal}")
    return 0


def cmd_verify(args) -> int:
    with open(args.certificate) as fh:
        cert = parse_certificate(fh.read())
    report = verify_certificate(cert, cap=args.cap)
    print(report.format())
    if report.verdict == "PASS":
        return 0
    if report.verdict == "FAIL":
        return 1
    return 2


def cmd_identities(args) -> int:
    tags = [t.strip() for t in args.fields.split(",") if t.strip()]
    results = run_identity_suite(tags, seed=args.seed)
    print(summarize(results))
    return 0 if all(r.ok for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polyauto",
        description="Exact polynomial automorphism algebra and "
                    "normal-closure certificates")
    ap.add_argument("--cap", type=int, default=DEFAULT_DEGREE_CAP,
                    help="total-degree cap for expansions")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify an automorphism")
    p.add_argument("map")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compose", help="compose two automorphisms")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("invert", help="invert a structured automorphism")
    p.add_argument("map")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("jacobian", help="Jacobian determinant")
    p.add_argument("map")
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("vd", help="vector degree of a triangular map")
    p.add_argument("map")
    p.set_defaults(func=cmd_vd)

    p = sub.add_parser("exp", help="expand exp(FD)")
    p.add_argument("--field", required=True)
    p.add_argument("-n", "--nvars", type=int, required=True)
    p.add_argument("kernel", help="the kernel polynomial F")
    p.add_argument("derivation", help="D(q1, ..., qn)")
    p.set_defaults(func=cmd_exp)

    p = sub.add_parser("certify",
                       help="emit a normal co-tameness certificate")
    p.add_argument("map")
    p.add_argument("--out", help="output .nct path")
    p.add_argument("--probe-bound", type=int, default=None,
                   help="override the commutator probe search bound")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="independently verify a certificate")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("identities", help="run the identity suite")
    p.add_argument("--fields", default="Q,F5,F4,F9")
    p.add_argument("--seed", type=int, default=2024)
    p.set_defaults(func=cmd_identities)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AlgebraError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
