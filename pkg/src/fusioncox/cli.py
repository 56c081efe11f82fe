"""Command-line driver.  JSON goes to stdout, diagnostics to stderr.

Exit codes: 0 ok, 1 structural or IO error, 2 verification failed,
3 inconclusive (a cap or bound was reached).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .errors import ConvergenceError, FusionCoxError, InvariantError, StructureError
from .folding import Partition, check_strong_admissible, verify_unfolding_is_strong_admissible
from .fusion_ring import fpdim_basis, validate
from .io import (
    SCHEMA,
    builtin_graph,
    coxeter_to_dot,
    dumps,
    load_json,
    read_graph,
    read_ring,
    realisation_from_dict,
    realisation_to_dict,
)
from .realisation import (
    DEFAULT_RELATION_CAP,
    INF,
    VARIANTS,
    build_RM_realisation,
    check_geometric,
    verify_coxeter_relations,
)
from .reflection_geometry import (
    MAX_LENGTH_BOUND,
    RealRealisation,
    chamber_orbit,
    classify,
    hyperplane_meets_orbit,
    normalise_real,
    positive_roots,
    restrict_hyperplane,
    verify_hyperplane_theorem,
)
from .unfolding import phi_image, psi_conjugation_check, unfold

EXIT_OK, EXIT_ERROR, EXIT_FAILED, EXIT_INCONCLUSIVE = 0, 1, 2, 3
DEFAULT_TOLERANCE = 1e-9
DEFAULT_DEPTH = 8
DEFAULT_LENGTH_BOUND = 8
ENV_TOLERANCE = "FUSIONCOX_TOLERANCE"


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; usage errors are structural here
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def _add_source(p):
    p.add_argument("input", nargs="?", help="realisation JSON, or a Coxeter graph (JSON or DOT)")
    p.add_argument("--builtin", help="builtin graph: i2:m, a:n, b:n, d:n, h:n, f:4, affine-a:n")
    p.add_argument("--variant", choices=VARIANTS, default="standard")


def _add_format(p, dot=False):
    p.add_argument("--format", choices=("json", "dot") if dot else ("json",), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fusioncox", description="Coxeter groups realised over fusion rings")
    parser.add_argument("--version", action="version", version=f"fusioncox {__version__}")
    parser.add_argument("--tolerance", type=float, default=None,
                        help=f"numeric tolerance (default ${ENV_TOLERANCE} or {DEFAULT_TOLERANCE})")
    sub = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    ring = sub.add_parser("ring").add_subparsers(dest="verb", required=True, parser_class=_Parser)
    for verb in ("validate", "show"):
        p = ring.add_parser(verb)
        p.add_argument("path", help="fusion ring JSON")

    realise = sub.add_parser("realise").add_subparsers(dest="verb", required=True, parser_class=_Parser)
    _add_source(realise.add_parser("build"))
    p = realise.add_parser("check")
    _add_source(p)
    p.add_argument("--relation-cap", type=int, default=DEFAULT_RELATION_CAP)

    unfold_p = sub.add_parser("unfold").add_subparsers(dest="verb", required=True, parser_class=_Parser)
    p = unfold_p.add_parser("graph")
    _add_source(p)
    _add_format(p, dot=True)
    _add_source(unfold_p.add_parser("cartan"))
    p = unfold_p.add_parser("phi")
    _add_source(p)
    p.add_argument("--word", default="", help="comma-separated generator names")

    p = sub.add_parser("roots")
    _add_source(p)
    p.add_argument("--system", choices=("folded", "unfolded"), default="folded")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)

    hyp = sub.add_parser("hyperplanes").add_subparsers(dest="verb", required=True, parser_class=_Parser)
    p = hyp.add_parser("restrict")
    _add_source(p)
    p.add_argument("--root", help="comma-separated coordinates of an unfolded root")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p = hyp.add_parser("verify")
    _add_source(p)
    p.add_argument("--depth", type=int, default=None)

    p = sub.add_parser("orbit")
    _add_source(p)
    p.add_argument("--length-bound", type=int, default=DEFAULT_LENGTH_BOUND)
    p.add_argument("--functional", help="comma-separated functional on the folded system")
    p.add_argument("--root", help="unfolded root whose restricted functional is tested")

    fold = sub.add_parser("fold").add_subparsers(dest="verb", required=True, parser_class=_Parser)
    p = fold.add_parser("check")
    p.add_argument("graph", nargs="?", help="Coxeter graph (JSON or DOT)")
    p.add_argument("partition", nargs="?", help='partition JSON {"vertex": "label"}')
    p.add_argument("--builtin", help="check the unfolding of a builtin graph instead")
    p.add_argument("--variant", choices=VARIANTS, default="standard")
    p.add_argument("--realisation", help="check the unfolding of a realisation JSON instead")
    return parser


# -- helpers ----------------------------------------------------------------------

def resolve_tolerance(flag):
    if flag is not None:
        return flag
    env = os.environ.get(ENV_TOLERANCE)
    if env:
        try:
            return float(env)
        except ValueError:
            raise StructureError(f"{ENV_TOLERANCE}={env!r} is not a number") from None
    return DEFAULT_TOLERANCE


def _flags(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("group", "verb") or v is None:
            continue
        out[k.replace("_", "-")] = v
    return out


def _realisation(args):
    if args.builtin and args.input:
        raise StructureError("give either an input file or --builtin, not both")
    if args.builtin:
        return build_RM_realisation(builtin_graph(args.builtin), args.variant)
    if not args.input:
        raise StructureError("an input file or --builtin is required")
    if args.input.endswith(".json"):
        d = load_json(args.input)
        if isinstance(d, dict) and "cartan" in d:
            real = realisation_from_dict(d)
            problems = check_geometric(real)
            if problems:
                raise InvariantError(f"realisation is not geometric: {problems[0]}")
            return real
    return build_RM_realisation(read_graph(args.input), args.variant)


def _csv_numbers(text, kind=float):
    try:
        return [kind(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise StructureError(f"expected comma-separated numbers, got {text!r}") from None


def _label(m):
    return "inf" if m == INF else m


def _roots_json(rs):
    return [list(r.coeffs) for r in rs.roots]


# -- verbs ------------------------------------------------------------------------

def cmd_ring(args, tol):
    ring = read_ring(args.path)
    report = validate(ring)
    out = {"ring": ring.name, "basis": list(ring.basis_labels), "ok": report.ok,
           "violations": [v.to_dict() for v in report.violations]}
    if args.verb == "show":
        out["unit"] = ring.basis_labels[ring.unit]
        out["involution"] = {ring.basis_labels[i]: ring.basis_labels[j] for i, j in enumerate(ring.involution)}
        out["products"] = {
            f"{ring.basis_labels[j]}*{ring.basis_labels[k]}": str(ring.basis(j) * ring.basis(k))
            for j in range(ring.rank) for k in range(ring.rank)}
        if report.ok:
            out["fpdim"] = dict(zip(ring.basis_labels, fpdim_basis(ring)))
    return out, EXIT_OK if report.ok else EXIT_FAILED


def cmd_realise(args, tol):
    real = _realisation(args)
    if args.verb == "build":
        return realisation_to_dict(real), EXIT_OK
    problems = check_geometric(real, tol)
    rel = verify_coxeter_relations(real, args.relation_cap)
    out = {"geometric": {"ok": not problems, "problems": problems}, "relations": rel.to_dict(),
           "ring": real.ring.name, "coxeter": real.coxeter.to_rows()}
    if problems or not rel.ok:
        return out, EXIT_FAILED
    return out, EXIT_OK if rel.complete else EXIT_INCONCLUSIVE


def cmd_unfold(args, tol):
    real = _realisation(args)
    u = unfold(real)
    names = u.vertex_names()
    if args.verb == "graph":
        if args.format == "dot":
            return coxeter_to_dot(u.graph, "unfolded"), EXIT_OK
        edges = [{"a": names[a], "b": names[b], "label": _label(u.graph.label(a, b))}
                 for a in range(u.size) for b in range(a + 1, u.size) if u.graph.label(a, b) != 2]
        return {"vertices": names, "edges": edges, "coxeter": u.graph.to_rows()}, EXIT_OK
    if args.verb == "cartan":
        return {"vertices": names, "cartan": u.cartan_z.tolist(),
                "symmetric": bool(np.array_equal(u.cartan_z, u.cartan_z.T))}, EXIT_OK
    gens = list(real.coxeter.names)
    word = [w.strip() for w in args.word.split(",") if w.strip()]
    unknown = [w for w in word if w not in gens]
    if unknown:
        raise StructureError(f"unknown generators {unknown}; expected {gens}")
    psi = psi_conjugation_check(u)
    out = {"phi": {g: [u.vertex_name(v) for v in u.phi[s]] for s, g in enumerate(gens)},
           "word": word, "image": [u.vertex_name(v) for v in phi_image(u, [gens.index(w) for w in word])],
           "psi_check": psi}
    return out, EXIT_OK if psi["ok"] else EXIT_FAILED


def cmd_roots(args, tol):
    real = _realisation(args)
    if args.system == "folded":
        rr = RealRealisation.folded(real)
        names = list(real.coxeter.names)
    else:
        rr = RealRealisation.from_unfolded(unfold(real))
        names = list(rr.names)
    rs = positive_roots(rr, args.depth, tol)
    out = {"system": args.system, "simple": names, "classification": classify(rr, tol),
           "count": len(rs), "complete": rs.complete, "depth": rs.depth, "roots": _roots_json(rs)}
    return out, EXIT_OK if rs.complete else EXIT_INCONCLUSIVE


def cmd_hyperplanes(args, tol):
    real = _realisation(args)
    u = unfold(real)
    if args.verb == "verify":
        rep = verify_hyperplane_theorem(u, tol, args.depth)
        code = {"pass": EXIT_OK, "fail": EXIT_FAILED}.get(rep["status"], EXIT_INCONCLUSIVE)
        return rep, code
    if args.root:
        coords = _csv_numbers(args.root, int)
        h = restrict_hyperplane(u, coords, tol)
        return {"root": coords, "restricted": list(h.normal)}, EXIT_OK
    rs = positive_roots(RealRealisation.from_unfolded(u), args.depth, tol)
    items = [{"root": list(r.coeffs), "restricted": list(restrict_hyperplane(u, r, tol).normal)}
             for r in rs.roots]
    out = {"vertices": u.vertex_names(), "complete": rs.complete, "restrictions": items}
    return out, EXIT_OK if rs.complete else EXIT_INCONCLUSIVE


def cmd_orbit(args, tol):
    if args.length_bound > MAX_LENGTH_BOUND or args.length_bound < 0:
        raise StructureError(f"--length-bound must be in [0, {MAX_LENGTH_BOUND}]")
    real = _realisation(args)
    rr = RealRealisation.folded(real)
    orbit = chamber_orbit(rr, args.length_bound, tol)
    out = {"chambers": len(orbit), "bound": orbit.bound, "complete": orbit.complete,
           "words": [[real.coxeter.names[s] for s in w] for w in orbit.words]}
    if args.functional and args.root:
        raise StructureError("give either --functional or --root")
    if args.root:
        h = restrict_hyperplane(unfold(real), _csv_numbers(args.root, int), tol)
    elif args.functional:
        h = normalise_real(_csv_numbers(args.functional), tol)
    else:
        return out, EXIT_OK
    meet = hyperplane_meets_orbit(orbit, h, tol)
    if "witness" in meet:
        for k in ("word", "positive", "negative"):
            if k in meet["witness"]:
                meet["witness"][k] = [real.coxeter.names[s] for s in meet["witness"][k]]
    out.update({"functional": list(h.normal), "meets": meet})
    return out, EXIT_OK if meet["outcome"] == "yes" else EXIT_INCONCLUSIVE


def cmd_fold(args, tol):
    if args.builtin or args.realisation:
        ns = argparse.Namespace(builtin=args.builtin, input=args.realisation, variant=args.variant)
        rep = verify_unfolding_is_strong_admissible(unfold(_realisation(ns)))
        return rep, EXIT_OK if rep["ok"] else EXIT_FAILED
    if not (args.graph and args.partition):
        raise StructureError("fold check needs GRAPH and PARTITION, or --builtin/--realisation")
    graph = read_graph(args.graph)
    mapping = load_json(args.partition)
    if not isinstance(mapping, dict):
        raise StructureError("partition JSON must map vertex names to labels")
    res = check_strong_admissible(graph, Partition.from_mapping(graph, mapping))
    out = res.to_dict()
    if res.folded is not None:
        out["labels"] = list(res.folded.names)
    return out, EXIT_OK if res.ok else EXIT_FAILED


COMMANDS = {"ring": cmd_ring, "realise": cmd_realise, "unfold": cmd_unfold, "roots": cmd_roots,
            "hyperplanes": cmd_hyperplanes, "orbit": cmd_orbit, "fold": cmd_fold}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    command = args.group + (f" {args.verb}" if getattr(args, "verb", None) else "")
    try:
        tol = resolve_tolerance(args.tolerance)
        result, code = COMMANDS[args.group](args, tol)
    except (FusionCoxError, ValueError) as exc:
        code = EXIT_FAILED if isinstance(exc, InvariantError) else EXIT_ERROR
        if isinstance(exc, ConvergenceError):
            code = EXIT_INCONCLUSIVE
        print(f"fusioncox {command}: {exc}", file=stderr)
        return code
    if isinstance(result, str):
        stdout.write(result)
    else:
        flags = _flags(args)
        flags["tolerance"] = tol
        report = {"schema": SCHEMA, "version": __version__, "command": command,
                  "flags": flags, "exit_code": code, "result": result}
        stdout.write(dumps(report))
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
