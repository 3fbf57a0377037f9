"""Command-line front end (``orbit-calc``).

Exit codes: 0 success, 1 verification finding, 2 usage or input error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .algebra import ChowClass, QuantumContext, UniPoly
from .classes import (
    InvariantError,
    class_from_duals,
    class_via_kernel,
    class_via_permutation_formula,
    graph_closure_class,
    monomial_duals,
    nonequivariant_class,
)
from .enumerative import (
    grassmannian_degree,
    line_section_class_closed_form,
    line_section_class_via_pipeline,
    tri_incident_report,
    two_to_one,
)
from .library import six_point_family, small_library
from .matroid import (
    Matroid,
    MatroidError,
    PathMatrix,
    QMatrix,
    RankDeficiencyError,
    general_matrix,
    identity_matroid,
    matroid_from_matrix,
    partition,
    path_heights,
    schubert,
    uniform,
)
from .poly import AlgebraError, Poly, parse_coeff, parse_poly
from .polytope import indicator_residual, regular_subdivision, shadow_subdivision
from .quantum import kronecker_dual, mhbar, partition_expr, schubert_expr, uniform_expr
from .verify import SUITE_NAMES, extended_example, run_suite

OK, FINDING, USAGE, INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ----------------------------------------------------------------------
# input handling


def load_payload(path):
    if path is None:
        raise UsageError("this command needs --input FILE (or - for stdin)")
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON input: {exc}") from exc
    except OSError as exc:
        raise UsageError(str(exc)) from exc


def _construct(obj, seed):
    kind = obj["construct"]
    if kind == "uniform":
        d, n = int(obj["d"]), int(obj["n"])
        return uniform(d, n), uniform_expr(d, n)
    if kind == "general":
        return matroid_from_matrix(general_matrix(int(obj["d"]), int(obj["n"]), seed=seed)), None
    if kind == "schubert":
        ranks, sets = [int(x) for x in obj["ranks"]], [list(s) for s in obj["sets"]]
        return schubert(ranks, sets, seed=seed), schubert_expr(ranks, sets)
    if kind == "partition":
        blocks = [list(b) for b in obj["blocks"]]
        return partition(blocks, seed=seed), partition_expr(blocks)
    if kind == "identity":
        return identity_matroid(int(obj["n"])), None
    if kind == "named":
        name = obj["name"]
        fam = six_point_family()
        if name in fam:
            return fam[name], None
        lib = small_library()
        if name in lib:
            return lib[name], None
        raise UsageError(f"unknown named matroid {name!r}")
    raise UsageError(f"unknown constructor {kind!r}")


def parse_matroid(obj, seed=0, allow_deficient=False):
    """(Matroid or None, MatroidExpr or None, n) from a payload."""
    if not isinstance(obj, dict):
        raise UsageError("matroid payload must be a JSON object")
    if "matroid" in obj:
        return parse_matroid(obj["matroid"], seed, allow_deficient)
    if "construct" in obj:
        m, expr = _construct(obj, seed)
        return m, expr, m.n
    if "bases" in obj:
        m = Matroid.from_json(obj)
        return m, None, m.n
    if "entries" in obj:
        mat = QMatrix.from_json(obj)
        try:
            m = matroid_from_matrix(mat)
        except RankDeficiencyError:
            if allow_deficient:
                return None, None, mat.cols
            raise
        return m, None, m.n
    raise UsageError("payload needs 'bases', 'entries', 'construct' or 'matroid'")


def make_context(args) -> QuantumContext:
    if args.context == "split":
        if args.r not in (None, 1):
            raise UsageError("the split context has r = 1")
        return QuantumContext.split()
    r = 1 if args.r is None else args.r
    if r < 0:
        raise UsageError("--r must be nonnegative")
    if args.context == "nonequivariant":
        return QuantumContext.nonequivariant(r)
    return QuantumContext.universal(r)


def _parse_input_poly(item, ctx):
    if isinstance(item, dict):
        p = Poly.from_json(item)
        name = "z" if "z" in p.vars else "H"
        return UniPoly.from_poly(p, name, ctx.coeff_vars)
    text = str(item)
    for name in ("H", "z"):
        try:
            p = parse_poly(text, (name,) + ctx.coeff_vars)
        except AlgebraError:
            continue
        return UniPoly.from_poly(p, name, ctx.coeff_vars)
    raise UsageError(f"cannot parse input polynomial {text!r} over {('H',) + ctx.coeff_vars}")


def parse_inputs(obj, n, ctx):
    raw = obj.get("inputs") if isinstance(obj, dict) else None
    if raw is None:
        return None
    if not isinstance(raw, list) or len(raw) != n:
        raise UsageError(f"expected a list of {n} inputs")
    return [_parse_input_poly(item, ctx) for item in raw]


# ----------------------------------------------------------------------
# output


def emit(args, obj, text):
    if args.format == "json":
        sys.stdout.write(json.dumps(obj) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _bases_text(m: Matroid) -> str:
    body = " ".join("{" + ",".join(map(str, b)) + "}" for b in m.basis_list())
    return f"n={m.n} d={m.d} bases={len(m.bases)}\n{body}"


def _class_json(c: ChowClass) -> dict:
    return c.to_json()


# ----------------------------------------------------------------------
# commands


def cmd_matroid(args):
    obj = load_payload(args.input)
    m, _, _ = parse_matroid(obj, args.seed)
    emit(args, m.to_json(), _bases_text(m))
    return OK


def cmd_class(args):
    obj = load_payload(args.input)
    ctx = make_context(args)
    m, _, n = parse_matroid(obj, args.seed, allow_deficient=args.via in ("formula", "noneq"))
    if args.via == "noneq":
        if args.context != "universal" and ctx.coeff_vars:
            raise UsageError("--via noneq uses F = z^(r+1)")
        out = ChowClass.zero(QuantumContext.nonequivariant(ctx.r), n) if m is None else nonequivariant_class(m, ctx.r)
    elif m is None:
        out = ChowClass.zero(ctx, n)
    elif args.via == "formula":
        out = class_via_permutation_formula(m, ctx, verify=args.check, seed=args.seed)
    elif args.via == "kernel":
        out = class_via_kernel(m, ctx)
    else:
        out = class_from_duals(m, ctx)
    if args.check and m is not None and args.via != "noneq":
        other = class_from_duals(m, ctx) if args.via != "duals" else class_via_permutation_formula(m, ctx)
        if other != out:
            raise InvariantError("class routes disagree")
    emit(args, _class_json(out), str(out))
    return OK


def cmd_dual(args):
    obj = load_payload(args.input)
    ctx = make_context(args)
    m, expr, n = parse_matroid(obj, args.seed)
    inputs = parse_inputs(obj, n, ctx)
    if inputs is not None:
        val = kronecker_dual(expr if expr is not None else m, inputs, ctx)
        emit(args, {"r": ctx.r, "n": n, "value": val.to_json()}, str(val))
        return OK
    table = monomial_duals(m, ctx)
    rows = sorted(table.items())
    obj_out = {"r": ctx.r, "n": n, "duals": [{"exp": list(a), "value": p.to_json()} for a, p in rows]}
    text = "\n".join(f"{list(a)}: {p}" for a, p in rows)
    emit(args, obj_out, text or "0")
    return OK


def cmd_mhbar(args):
    obj = load_payload(args.input)
    ctx = make_context(args)
    m, expr, n = parse_matroid(obj, args.seed)
    inputs = parse_inputs(obj, n, ctx)
    if inputs is None:
        inputs = [ctx.z(1) for _ in range(n)]
    val = mhbar(expr if expr is not None else m, inputs, ctx, check=args.check)
    p = val.to_poly()
    emit(args, {"r": ctx.r, "n": n, **p.to_json()}, str(p))
    return OK


def cmd_graph(args):
    obj = load_payload(args.input)
    ctx = make_context(args)
    m, _, n = parse_matroid(obj, args.seed)
    g = graph_closure_class(m, ctx)
    emit(args, {"r": ctx.r, "n": n, "coeff_vars": list(ctx.coeff_vars), **g.to_json()}, str(g))
    return OK


def _heights_from_payload(obj, seed):
    if "path" in obj:
        parent, heights = path_heights(PathMatrix.from_json(obj["path"]))
        return parent, heights
    parent, _, _ = parse_matroid(obj, seed)
    raw = obj.get("heights")
    if raw is None:
        raise UsageError("--heights needs 'heights' or 'path' in the payload")
    # unlisted bases sit at height zero
    heights = {tuple(b): 0 for b in parent.basis_list()}
    for item in raw:
        heights[tuple(sorted(int(x) for x in item["basis"]))] = parse_coeff(str(item["height"]))
    return parent, heights


def cmd_subdivide(args):
    obj = load_payload(args.input)
    if (args.dir is None) == (not args.heights):
        raise UsageError("subdivide needs exactly one of --dir i,j or --heights")
    if args.dir is not None:
        m, _, _ = parse_matroid(obj, args.seed)
        try:
            i, j = (int(x) for x in args.dir.split(","))
        except ValueError as exc:
            raise UsageError("--dir expects two indices i,j") from exc
        sub = shadow_subdivision(m, i, j)
    else:
        parent, heights = _heights_from_payload(obj, args.seed)
        sub = regular_subdivision(parent, heights)
    lines = [f"parent: {_bases_text(sub.parent).splitlines()[0]}"]
    for c, s in sub.cells:
        lines.append(f"cell {'+' if s > 0 else '-'}: " + " ".join("{" + ",".join(map(str, b)) + "}" for b in c.basis_list()))
    code = OK
    if args.check:
        ok = indicator_residual(sub.parent, sub.cells, samples=2000, seed=args.seed)
        ctx = make_context(args)
        if ok and sub.parent.is_connected():
            total = ChowClass.zero(ctx, sub.parent.n)
            for c, s in sub.cells:
                total = total + (class_from_duals(c, ctx) if s > 0 else -class_from_duals(c, ctx))
            ok = total == class_from_duals(sub.parent, ctx)
        lines.append("check: " + ("ok" if ok else "FAIL"))
        code = OK if ok else FINDING
    emit(args, sub.to_json(), "\n".join(lines))
    return code


def cmd_verify(args):
    findings = run_suite(args.suite, seed=args.seed, jobs=args.jobs, check=args.check)
    bad = sum(1 for f in findings if not f.ok)
    text = "\n".join(f.line() for f in findings) + f"\n{len(findings) - bad} passed, {bad} failed"
    emit(args, {"suite": args.suite, "seed": args.seed, "findings": [f.to_json() for f in findings], "failed": bad}, text)
    return FINDING if bad else OK


def cmd_line_sections(args):
    r = 2 if args.r is None else args.r
    if r < 2:
        raise UsageError("line-sections needs --r >= 2")
    d = 2 * r + 1
    if args.report:
        rep = tri_incident_report(d, r)
        lines = []
        for row in rep["per_i"]:
            a, b, c = row["multiplicities"]
            extra = f"  ({row['degree'] // 2} lines, parametrization two-to-one)" if two_to_one(d, row["i"]) else ""
            lines.append(f"i={row['i']} contact ({a},{b},{c}) degree {row['degree']}{extra}")
        lines.append(f"total {rep['total']}")
        emit(args, rep, "\n".join(lines))
        return OK
    closed = line_section_class_closed_form(d)
    piped = line_section_class_via_pipeline(d, uniform_expr(2, d))
    if closed != piped:
        raise InvariantError("closed form and pipeline disagree")
    deg = grassmannian_degree(closed, r)
    emit(args, {"r": r, "d": d, "degree": deg, "class": closed.to_json()}, str(deg))
    return OK


def cmd_example(args):
    rs = (2, 3) if args.r is None else (args.r,)
    findings = extended_example(rs)
    bad = sum(1 for f in findings if not f.ok)
    text = "\n".join(f.line() for f in findings)
    emit(args, {"findings": [f.to_json() for f in findings], "failed": bad}, text)
    return FINDING if bad else OK


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=int, default=None, help="projective dimension r")
    common.add_argument("--input", default=None, help="JSON payload file, or - for stdin")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--check", action="store_true", help="enable cross-route assertions")
    common.add_argument("--context", choices=("universal", "nonequivariant", "split"), default="universal")

    p = argparse.ArgumentParser(prog="orbit-calc", description="Equivariant classes of matrix orbit closures.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("matroid", parents=[common], help="matroid of a matrix or constructor").set_defaults(fn=cmd_matroid)
    c = sub.add_parser("class", parents=[common], help="equivariant class")
    c.add_argument("--via", choices=("duals", "formula", "noneq", "kernel"), default="duals")
    c.set_defaults(fn=cmd_class)
    sub.add_parser("dual", parents=[common], help="Kronecker duals").set_defaults(fn=cmd_dual)
    sub.add_parser("mhbar", parents=[common], help="the operator [M]_hbar").set_defaults(fn=cmd_mhbar)
    sub.add_parser("graph", parents=[common], help="graph-closure class").set_defaults(fn=cmd_graph)
    s = sub.add_parser("subdivide", parents=[common], help="shadow-facet or regular subdivision")
    s.add_argument("--dir", default=None, help="direction i,j")
    s.add_argument("--heights", action="store_true", help="regular subdivision from heights in the payload")
    s.set_defaults(fn=cmd_subdivide)
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=SUITE_NAMES)
    v.set_defaults(fn=cmd_verify)
    ls = sub.add_parser("line-sections", parents=[common], help="lines on hypersurfaces")
    ls.add_argument("--report", action="store_true", help="tri-incident decomposition")
    ls.set_defaults(fn=cmd_line_sections)
    for name in ("extended-example", "example-3-1"):
        sub.add_parser(name, parents=[common], help="six-point subdivision example").set_defaults(fn=cmd_example)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else USAGE
    env_seed = os.environ.get("ORBIT_CALC_SEED")
    if env_seed is not None:
        try:
            args.seed = int(env_seed)
        except ValueError:
            sys.stderr.write("ORBIT_CALC_SEED must be an integer\n")
            return USAGE
    try:
        return args.fn(args)
    except InvariantError as exc:
        sys.stderr.write(f"invariant violation: {exc}\n")
        return INVARIANT
    except (UsageError, MatroidError, AlgebraError, ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except AssertionError as exc:
        sys.stderr.write(f"invariant violation: {exc}\n")
        return INVARIANT


def main() -> None:
    sys.exit(run())
