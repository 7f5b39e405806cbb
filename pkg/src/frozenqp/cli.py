"""Command-line surface.

Query commands exit 0 and print their answer; verification commands exit 0
only when the verified property holds and 1 otherwise; usage and input
errors exit 2.  All numeric output is exact ("p/q"), reports are JSON with
sorted keys so repeated runs are byte identical.
"""

import argparse
import json
import sys
from fractions import Fraction

from .quiver import (
    SchemaViolation,
    QuiverError,
    freeze,
    quiver_from_json,
    quiver_to_json,
    quiver_degrees_from_json,
    to_dot,
)
from .paths import (
    AlgebraPresentation,
    NotStabilized,
    InvalidRelation,
    PathAlgebraError,
    quotient_basis,
)
from .potential import (
    FrozenQP,
    MissingDegreeMap,
    PotentialError,
    check_hypotheses,
    is_reduced_qp,
    jacobian_relations,
    qp_from_json,
    qp_to_json,
)
from .subalgebra import (
    bar_jacobian_qp,
    bar_quotient_presentation,
    degree_zero_presentation,
    presentation_from_json,
    presentation_to_json,
)
from .keller import keller_extend, verify_endomorphism_match, KellerError
from . import coxeter as cox
from .birs import build_birs_qp, admissible_orientation, last_occurrences, birs_to_json, BirsError
from . import modrep
from .ratlin import frac_str
from . import verify as verify_mod


class UsageError(Exception):
    pass


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError("cannot read %s: %s" % (path, e))
    except json.JSONDecodeError as e:
        raise SchemaViolation("invalid JSON in %s: %s" % (path, e))


def _parse_word(text):
    try:
        return tuple(int(x) for x in text.split(",") if x != "")
    except ValueError:
        raise UsageError("words are comma-separated integers, got %r" % text)


def _emit(args, payload, text=None):
    if text is not None:
        out = text
    else:
        out = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _pe_json(pe):
    from .paths import path_element_to_json

    return path_element_to_json(pe)


def cmd_qp(args):
    qp = qp_from_json(_load_json(args.qp))
    if args.action == "derive":
        rels = jacobian_relations(qp)
        if args.arrow is not None:
            rels = [(a, d) for a, d in rels if a == args.arrow or qp.quiver.arrows[a].name == args.arrow]
        result = [{"arrow": a, "derivative": _pe_json(d), "zero": d.is_zero()} for a, d in rels]
        _emit(args, {"command": "qp derive", "result": result})
        return 0
    if args.action == "check":
        pi = set(int(x) for x in args.pi.split(",")) if args.pi else set(qp.frozen.frozen_vertices)
        rep = check_hypotheses(qp, pi)
        _emit(args, {"command": "qp check", "result": rep.to_json(), "pass": rep.all_pass()})
        return 0 if rep.all_pass() else 1
    if args.action == "reduced":
        ok, reasons = is_reduced_qp(qp)
        _emit(args, {"command": "qp reduced", "result": {"reduced": ok, "reasons": [r[0] for r in reasons]}})
        return 0
    raise UsageError("unknown qp action")


def cmd_subalgebra(args):
    qp = qp_from_json(_load_json(args.qp))
    if args.which == "a":
        pres = degree_zero_presentation(qp)
        _emit(args, {"command": "subalgebra a", "result": presentation_to_json(pres)})
    elif args.which == "abar":
        pres = bar_quotient_presentation(qp)
        _emit(args, {"command": "subalgebra abar", "result": presentation_to_json(pres)})
    else:
        bar = bar_jacobian_qp(qp)
        _emit(args, {"command": "subalgebra bbar", "result": qp_to_json(bar)})
    return 0


def cmd_keller(args):
    if args.action == "extend":
        pres = presentation_from_json(_load_json(args.pres))
        ext = keller_extend(pres)
        result = {
            "quiver": quiver_to_json(ext.extended_quiver),
            "added_arrows": list(ext.added_arrows),
            "potential": qp_to_json(
                FrozenQP(ext.extended_quiver, ext.potential,
                         freeze(ext.extended_quiver, ()), ext.added_phi())
            )["potential"],
        }
        _emit(args, {"command": "keller extend", "result": result})
        return 0
    qp = qp_from_json(_load_json(args.qp))
    pi = set(int(x) for x in args.pi.split(",")) if args.pi else None
    rep = verify_endomorphism_match(qp, pi, max_len=args.max_len)
    _emit(args, {"command": "keller verify", "result": rep.to_json(), "pass": rep.ok()})
    return 0 if rep.ok() else 1


def cmd_coxeter(args):
    graph = quiver_from_json(_load_json(args.graph))
    sys_ = cox.coxeter_system(graph)
    if args.action == "system":
        m = {"%s,%s" % (u, v): (sys_.m[(u, v)] if sys_.m[(u, v)] != cox.INF else "inf")
             for u in sys_.vertices for v in sys_.vertices}
        B = {"%s,%s" % (u, v): frac_str(sys_.B[sys_.pos[u]][sys_.pos[v]])
             for u in sys_.vertices for v in sys_.vertices}
        _emit(args, {"command": "coxeter system", "result": {"matrix": m, "form": B}})
        return 0
    if args.action == "reduced":
        word = _parse_word(args.word)
        ans = cox.is_reduced(sys_, word)
        _emit(args, {"command": "coxeter reduced", "result": ans})
        return 0
    if args.action == "reduce":
        word = _parse_word(args.word)
        red = cox.reduce_word(sys_, word)
        _emit(args, {"command": "coxeter reduce", "result": list(red)})
        return 0
    if args.action == "equal":
        w1, w2 = _parse_word(args.word), _parse_word(args.word2)
        ans = cox.elements_equal(sys_, w1, w2)
        _emit(args, {"command": "coxeter equal", "result": ans})
        return 0
    if args.action == "enumerate":
        words = cox.enumerate_group(sys_, args.cap)
        _emit(args, {"command": "coxeter enumerate", "result": {"order": len(words), "words": [list(w) for w in words]}})
        return 0
    raise UsageError("unknown coxeter action")


def cmd_birs(args):
    graph = quiver_from_json(_load_json(args.graph))
    word = _parse_word(args.word)
    if args.action == "last":
        _emit(args, {"command": "birs last", "result": {str(k): v for k, v in last_occurrences(word).items()}})
        return 0
    if args.action == "orient":
        q = admissible_orientation(graph, word)
        _emit(args, {"command": "birs orient", "result": quiver_to_json(q)})
        return 0
    b = build_birs_qp(graph, word)
    if args.dot or args.format == "dot":
        text = to_dot(b.qp.quiver, b.qp.frozen, b.qp.phi)
        if args.dot:
            with open(args.dot, "w") as fh:
                fh.write(text)
            _emit(args, {"command": "birs build", "result": {"dot": args.dot,
                                                             "vertices": len(b.qp.quiver.vertices)}})
        else:
            _emit(args, None, text=text)
        return 0
    _emit(args, {"command": "birs build", "result": birs_to_json(b)})
    return 0


def _load_presentation(args):
    return presentation_from_json(_load_json(args.pres))


def cmd_alg(args):
    if args.action in ("basis", "dim"):
        pres = _load_presentation(args)
        alg = quotient_basis(pres, max_len=args.max_len)
        if args.action == "dim":
            _emit(args, {"command": "alg dim", "result": alg.dim})
            return 0
        basis = []
        for i, p in enumerate(alg.basis):
            basis.append({"arrows": list(p.arrows), "src": p.src, "tgt": p.tgt,
                          "length": alg.length[i]})
        _emit(args, {"command": "alg basis", "result": {"dimension": alg.dim, "basis": basis,
                                                        "stabilized_at": alg.stabilization_layer}})
        return 0
    if args.action == "gldim":
        pres = _load_presentation(args)
        gd = modrep.global_dimension(pres, bound=args.bound, max_len=args.max_len)
        _emit(args, {"command": "alg gldim", "result": gd})
        return 0
    if args.action == "resolve":
        pres = _load_presentation(args)
        alg = quotient_basis(pres, max_len=args.max_len)
        res = modrep.projective_resolution(alg, args.vertex, bound=args.bound)
        steps = [{str(v): m for v, m in step.items()} for step in res.steps]
        _emit(args, {"command": "alg resolve", "result": {"length": res.length, "steps": steps}})
        return 0
    if args.action == "exact":
        data = _load_json(args.complex)
        quiver = quiver_from_json(data["quiver"]) if "quiver" in data else None
        if quiver is None:
            raise SchemaViolation("complex JSON needs 'quiver'")
        mods = [modrep.module_from_json(m, quiver) for m in data.get("modules", [])]
        maps = []
        for fam in data.get("maps", []):
            maps.append({int(v): [[Fraction(x) for x in row] for row in mat]
                         for v, mat in fam.items()})
        ex, hom = modrep.check_complex_exact(mods, maps, quiver=quiver)
        _emit(args, {"command": "alg exact", "result": {"exact": ex, "homology": hom}, "pass": ex})
        return 0 if ex else 1
    raise UsageError("unknown alg action")


def cmd_rep(args):
    graph = quiver_from_json(_load_json(args.graph))
    word = _parse_word(args.word)
    if args.action == "lambda":
        lam = modrep.lambda_w_algebra(graph, word, max_len=args.max_len)
        _emit(args, {"command": "rep lambda", "result": {
            "dimension": lam.dim,
            "layer_dimensions": {str(k): v for k, v in sorted(lam.layer_dims.items())},
            "window": lam.window}})
        return 0
    tw = modrep.tw_summands(graph, word, max_len=args.max_len)
    if args.action == "tw":
        result = []
        for p, m in enumerate(tw.modules, start=1):
            result.append({"summand": p, "letter": word[p - 1],
                           "dims": {str(v): m.dims[v] for v in sorted(m.dims) if m.dims[v]},
                           "total": m.total_dim})
        _emit(args, {"command": "rep tw", "result": result})
        return 0
    if args.action == "hom":
        M, N = tw.modules[args.i - 1], tw.modules[args.j - 1]
        homs = modrep.hom_space(tw.action_presentation, M, N)
        result = {"dimension": len(homs),
                  "degrees": sorted(h.degree for h in homs if h.degree is not None)}
        _emit(args, {"command": "rep hom", "result": result})
        return 0
    if args.action == "endquiver":
        rep = modrep.end_gabriel_quiver(tw.action_presentation, tw.modules)
        if args.format == "dot":
            _emit(args, None, text=to_dot(rep.quiver))
            return 0
        _emit(args, {"command": "rep endquiver", "result": {
            "quiver": quiver_to_json(rep.quiver),
            "arrow_counts": {"%d>%d" % k: v for k, v in sorted(rep.arrow_counts.items())},
            "degrees": {"%d>%d" % k: v for k, v in sorted(rep.arrow_degrees.items())} if rep.arrow_degrees else None,
        }})
        return 0
    raise UsageError("unknown rep action")


def cmd_verify_example(args):
    ok, rep = verify_mod.verify_example(args.name, max_len=args.max_len)
    _emit(args, {"command": "verify-example %s" % args.name, "result": rep, "pass": ok})
    return 0 if ok else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-len", type=int, default=32, dest="max_len",
                        help="length bound for quotient stabilization (default 32)")
    common.add_argument("--format", choices=("json", "dot"), default="json")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    ap = argparse.ArgumentParser(prog="frozenqp",
                                 description="graded frozen quivers with potentials: "
                                             "construction and exact verification")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("qp", parents=[common])
    p.add_argument("action", choices=("derive", "check", "reduced"))
    p.add_argument("--qp", required=True, help="QP JSON file")
    p.add_argument("--arrow", default=None, help="restrict derive to one arrow (id or name)")
    p.add_argument("--pi", default=None, help="projective-injective vertices, comma separated")
    p.set_defaults(func=cmd_qp)

    p = sub.add_parser("subalgebra", parents=[common])
    p.add_argument("which", choices=("a", "abar", "bbar"))
    p.add_argument("--qp", required=True)
    p.set_defaults(func=cmd_subalgebra)

    p = sub.add_parser("keller", parents=[common])
    p.add_argument("action", choices=("extend", "verify"))
    p.add_argument("--pres", help="presentation JSON (extend)")
    p.add_argument("--qp", help="QP JSON (verify)")
    p.add_argument("--pi", default=None)
    p.set_defaults(func=cmd_keller)

    p = sub.add_parser("coxeter", parents=[common])
    p.add_argument("action", choices=("system", "reduced", "reduce", "equal", "enumerate"))
    p.add_argument("--graph", required=True)
    p.add_argument("--word", default="")
    p.add_argument("--word2", default="")
    p.add_argument("--cap", type=int, default=10000)
    p.set_defaults(func=cmd_coxeter)

    p = sub.add_parser("birs", parents=[common])
    p.add_argument("action", choices=("last", "orient", "build"))
    p.add_argument("--graph", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--dot", default=None, help="also write DOT of the built quiver here")
    p.set_defaults(func=cmd_birs)

    p = sub.add_parser("alg", parents=[common])
    p.add_argument("action", choices=("basis", "dim", "gldim", "resolve", "exact"))
    p.add_argument("--pres", help="presentation JSON")
    p.add_argument("--vertex", type=int, default=None)
    p.add_argument("--bound", type=int, default=12)
    p.add_argument("--complex", help="complex JSON for 'exact'")
    p.set_defaults(func=cmd_alg)

    p = sub.add_parser("rep", parents=[common])
    p.add_argument("action", choices=("lambda", "tw", "hom", "endquiver"))
    p.add_argument("--graph", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--j", type=int, default=1)
    p.set_defaults(func=cmd_rep)

    p = sub.add_parser("verify-example", parents=[common])
    p.add_argument("name", choices=("5.1", "5.2"))
    p.set_defaults(func=cmd_verify_example)

    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (UsageError, SchemaViolation) as e:
        sys.stderr.write("error: %s\n" % e)
        return 2
    except (QuiverError, PathAlgebraError, PotentialError, KellerError, BirsError,
            cox.CoxeterError, modrep.ModRepError, NotStabilized, ValueError) as e:
        sys.stderr.write("error: %s\n" % e)
        return 2


if __name__ == "__main__":
    sys.exit(main())
