"""``conekit`` command line.

Exit codes: 0 success, 2 parse/format error, 3 domain error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import buildings as bd
from . import conespace as cs
from . import exactlinalg as la
from .errors import DomainError, ParseError
from .hahnfield import INFINITY, compare, parse_hahn

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN = 0, 2, 3


def _approx(x: float) -> str:
    return f"{x:.8f}"


def _val_str(v) -> str:
    return "inf" if v == INFINITY else str(v)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}: {exc}") from None


def _rationals(text: str) -> tuple:
    return tuple(_rational(x) for x in text.split(","))


def _point(path):
    rep = la.load_matrix(path)
    return cs.ConePoint(rep)


# -- commands ---------------------------------------------------------------------

def cmd_val(args):
    v = parse_hahn(args.expr).valuation()
    return {"valuation": _val_str(v)}, [_val_str(v)]


def cmd_cmp(args):
    result = compare(parse_hahn(args.a), parse_hahn(args.b))
    return {"result": result.name}, [result.name]


def cmd_dist(args):
    d2 = cs.distance_sq(_point(args.a), _point(args.b))
    return (
        {"d2": str(d2.value), "d_approx": d2.distance},
        [f"d2 = {d2.value}", f"d ≈ {_approx(d2.distance)}"],
    )


def cmd_ldl(args):
    A = la.load_matrix(args.matrix)
    L, d = la.ldlt(A)
    lines = ["L ="] + ["  [" + ", ".join(str(x) for x in row) + "]" for row in L]
    lines.append("D = diag(" + ", ".join(str(x) for x in d) + ")")
    lines.append("positive definite: yes")
    return (
        {"L": [[str(x) for x in row] for row in L], "D": [str(x) for x in d],
         "positive_definite": True},
        lines,
    )


def cmd_det(args):
    det = la.determinant(la.load_matrix(args.matrix))
    return {"det": str(det), "valuation": _val_str(det.valuation())}, [str(det)]


def cmd_roots(args):
    if args.pencil:
        A, B = (la.load_matrix(p) for p in args.pencil)
        poly = la.generalized_charpoly(A, B)
    elif args.coeffs:
        poly = la.PolynomialK([parse_hahn(c) for c in args.coeffs])
    else:
        raise ParseError("give coefficients or --pencil A.json B.json")
    np_ = la.NewtonPolygon.of(poly)
    vals = sorted(np_.root_valuations())
    return (
        {
            "polynomial": [str(c) for c in poly.coeffs],
            "hull": [[i, str(v)] for i, v in np_.vertices],
            "root_valuations": [_val_str(v) for v in vals],
        },
        [f"p(x) = {poly}", "root valuations: {" + ", ".join(_val_str(v) for v in vals) + "}"],
    )


def cmd_cone_point(args):
    seq = cs.load_seqspec(args.seq)
    P = cs.point_from_sequence(seq)
    diag = [str(x) for x in P.rep.diagonal_entries()]
    vals = [str(x.valuation()) for x in P.rep.diagonal_entries()]
    return (
        {"diag": diag, "valuations": vals, "matrix": la.matrix_to_json(P.rep)},
        ["diag(" + ", ".join(diag) + ")", "valuations: (" + ", ".join(vals) + ")"],
    )


def cmd_rq(args):
    A = cs.load_seqspec(args.a)
    B = cs.load_seqspec(args.b) if args.b else cs.SeqSpec.identity(A.m)
    result = cs.relation_Rq(A, B, _rational(args.q))
    return {"q": args.q, "result": str(result)}, [str(result)]


def cmd_expcheck(args):
    entries = cs.exp_entries_from_json(bd.flags.load_json(args.seq))
    check = cs.exp_condition_check(entries)
    if check.admissible:
        return {"admissible": True, "k": check.k}, [f"admissible, k = {check.k}"]
    return {"admissible": False, "reason": check.reason}, [f"inadmissible: {check.reason}"]


def cmd_flag(args):
    frame = (
        bd.flags.frame_from_json(bd.flags.load_json(args.frame)) if args.frame else None
    )
    direction = bd.Direction.parse(args.direction)
    if frame is None:
        frame = bd.Frame.standard(len(direction.t))
    flag = bd.flag_at_infinity(frame, direction)
    return (
        {**bd.flags.flag_to_json(flag), "full": flag.is_full()},
        [repr(flag), "full flag" if flag.is_full() else f"partial flag, dims {list(flag.dims)}"],
    )


def cmd_frame(args):
    f1 = bd.flags.flag_from_json(bd.flags.load_json(args.flag1))
    f2 = bd.flags.flag_from_json(bd.flags.load_json(args.flag2))
    frame = bd.common_frame(f1, f2)
    ok = frame.adapts(f1) and frame.adapts(f2)
    return (
        {"frame": bd.flags.vectors_to_json(frame.vectors), "adapted": ok},
        [repr(frame), f"adapted to both flags: {'yes' if ok else 'no'}"],
    )


def cmd_coxeter(args):
    cx = bd.coxeter_complex(args.rank)
    faces = cx.face_counts()
    return (
        {"rank": cx.rank, "chambers": len(cx.chambers), "vertices": len(cx.vertices),
         "simplices": len(cx.simplices), "faces_by_dimension": faces},
        [f"A_{cx.rank} Coxeter complex", f"chambers: {len(cx.chambers)}",
         f"vertices: {len(cx.vertices)}", f"simplices: {len(cx.simplices)}"],
    )


def cmd_diamond(args):
    D = bd.diamond(_rationals(args.x), _rationals(args.y))
    verts = D.vertices()
    out = {"vertices": [[str(c) for c in v] for v in verts]}
    lines = ["vertices:"] + ["  (" + ", ".join(str(c) for c in v) + ")" for v in verts]
    if args.member:
        z = _rationals(args.member)
        out["member"] = D.member(z)
        lines.append(f"member {args.member}: {'yes' if out['member'] else 'no'}")
    return out, lines


def _chamber(text: str | None, m: int) -> tuple:
    if text is None:
        return bd.dominant_chamber(m)
    perm = tuple(int(x) - 1 for x in text.split(","))
    if sorted(perm) != list(range(m)):
        raise ParseError(f"chamber {text!r} is not a permutation of 1..{m}")
    return perm


def cmd_sector_check(args):
    x = _rationals(args.x)
    chamber = _chamber(args.chamber, len(x))
    v = _rationals(args.direction) if args.direction else None
    report = bd.sector_recovery_check(
        x, chamber, _rational(args.radius), v, samples=args.samples, seed=args.seed
    )
    s = report.summary()
    lines = [
        f"k_max = {report.k_max}, nested chain: {'yes' if report.nested else 'no'}",
        f"interior covered: {report.interior_covered}/{report.interior_sampled}",
        f"exterior rejected: {report.exterior_rejected}/{report.exterior_sampled}",
        f"sector recovery: {'holds' if report.holds else 'FAILS'}",
    ]
    return s, lines


def cmd_finite_building(args):
    cx = bd.finite_flag_complex(args.q, args.m)
    out = {"q": args.q, "m": args.m, "chambers": len(cx.chambers),
           "apartments": len(cx.apartments)}
    lines = [f"chambers: {len(cx.chambers)}", f"apartments: {len(cx.apartments)}"]
    if args.check_axioms:
        results = bd.check_axioms(cx, samples=args.samples, seed=args.seed)
        out["axioms"] = [r.summary() for r in results]
        for r in results:
            lines.append(f"{r.axiom}: {'holds' if r.holds else 'FAILS'} ({r.detail})")
    return out, lines


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=100)

    parser = argparse.ArgumentParser(prog="conekit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("val", cmd_val, "valuation of a field element")
    p.add_argument("expr")
    p = add("cmp", cmd_cmp, "compare two field elements")
    p.add_argument("a")
    p.add_argument("b")
    p = add("dist", cmd_dist, "cone distance between two matrix files")
    p.add_argument("a")
    p.add_argument("b")
    p = add("ldl", cmd_ldl, "LDL^T factorisation of a matrix file")
    p.add_argument("matrix")
    p = add("det", cmd_det, "determinant of a matrix file")
    p.add_argument("matrix")
    p = add("roots", cmd_roots, "root valuations from the Newton polygon")
    p.add_argument("coeffs", nargs="*", help="coefficients, constant term first")
    p.add_argument("--pencil", nargs=2, metavar=("A", "B"), help="use det(x A - B)")
    p = add("cone-point", cmd_cone_point, "cone point of a sequence file")
    p.add_argument("seq")
    p = add("rq", cmd_rq, "eventual truth of R_q(A, B)")
    p.add_argument("a")
    p.add_argument("b", nargs="?", help="defaults to the base point")
    p.add_argument("--q", required=True)
    p = add("expcheck", cmd_expcheck, "check the exponential growth condition")
    p.add_argument("seq")
    p = add("flag", cmd_flag, "flag at infinity of a frame and direction")
    p.add_argument("--frame", help="frame file (default: standard frame)")
    p.add_argument("--direction", required=True, help="comma-separated rationals")
    p = add("frame", cmd_frame, "common frame of two flags")
    p.add_argument("flag1")
    p.add_argument("flag2")
    p = add("coxeter", cmd_coxeter, "enumerate the A_n Coxeter complex")
    p.add_argument("--rank", type=int, required=True)
    p = add("diamond", cmd_diamond, "diamond of two apartment points")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--member")
    p = add("sector-check", cmd_sector_check, "recover a sector from nested diamonds")
    p.add_argument("--x", required=True)
    p.add_argument("--chamber", help="ordering of 1..m, largest coordinate first")
    p.add_argument("--direction")
    p.add_argument("--radius", default="3")
    p = add("finite-building", cmd_finite_building, "flag complex of GF(q)^m")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--check-axioms", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, lines = args.func(args)
    except ParseError as exc:
        print(f"conekit: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"conekit: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"conekit: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.json:
        print(json.dumps({"command": args.command, **out}, indent=2))
    else:
        print("\n".join(lines))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
