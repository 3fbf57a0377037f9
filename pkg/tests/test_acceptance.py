"""The twelve acceptance criteria, each with its own tolerance and time limit."""

import io
import time
from contextlib import redirect_stdout

from orbitcalc import cli
from orbitcalc.algebra import QuantumContext
from orbitcalc.classes import (
    class_from_duals,
    class_via_permutation_formula,
    diagonal_class,
    uniform_class_formula,
)
from orbitcalc.enumerative import (
    grassmannian_degree,
    line_section_class_closed_form,
    line_section_class_via_pipeline,
    tri_incident_report,
)
from orbitcalc.library import small_library
from orbitcalc.matroid import general_matrix, matroid_from_matrix, uniform
from orbitcalc.quantum import uniform_expr
from orbitcalc.verify import (
    brion_tasks,
    check_brion,
    check_graph,
    check_mhbar_props,
    check_noneq,
    check_serpar,
    check_structured,
    check_valuativity,
    extended_example,
    graph_tasks,
    mhbar_prop_tasks,
    noneq_tasks,
    run_tasks,
    serpar_tasks,
    structured_exprs,
    valuativity_tasks,
)

from util import report

LIB = small_library()


def failures(findings):
    return [f.line() for f in findings if not f.ok]


def both_routes(d, r):
    closed = grassmannian_degree(line_section_class_closed_form(d), r)
    piped = grassmannian_degree(line_section_class_via_pipeline(d, uniform_expr(2, d)), r)
    return closed, piped


def test_criterion_01_quintic_degree():
    t0 = time.perf_counter()
    closed, piped = both_routes(5, 2)
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.run(["line-sections", "--r", "2"])
    dt = time.perf_counter() - t0
    ok = closed == piped == 420 and code == 0 and buf.getvalue() == "420\n" and dt < 5
    assert report(1, ok, f"closed form {closed}, pipeline {piped}, cli {buf.getvalue().strip()!r}, {dt:.2f}s < 5s")


def test_criterion_02_septic_surface_degree():
    t0 = time.perf_counter()
    closed, piped = both_routes(7, 3)
    dt = time.perf_counter() - t0
    ok = closed == piped == 77070 and dt < 60
    assert report(2, ok, f"closed form {closed}, pipeline {piped}, {dt:.2f}s < 60s")


def test_criterion_03_tri_incident_quintic():
    rep = tri_incident_report(5, 2)
    degrees = tuple(row["degree"] for row in rep["per_i"])
    flexes, bitangents = degrees[0] // 2, degrees[1] // 2
    ok = (
        degrees == (90, 240, 90)
        and rep["total"] == 420
        and (flexes, bitangents) == (45, 120)
        and degrees == (2 * 45, 2 * 120, 2 * 45)
    )
    assert report(3, ok, f"degrees {degrees}, total {rep['total']}, bitangents {bitangents}, flexes {flexes}")


def test_criterion_04_extended_example():
    t0 = time.perf_counter()
    findings = extended_example((2, 3))
    dt = time.perf_counter() - t0
    bad = failures(findings)
    ok = not bad and len(findings) == 6 and dt < 120
    assert report(4, ok, f"{len(findings) - len(bad)}/{len(findings)} relations hold at r=2,3, {dt:.1f}s < 120s {bad}")


def test_criterion_05_diagonal_class():
    m = matroid_from_matrix(general_matrix(1, 2))
    checked = []
    for r in range(0, 5):
        ctx = QuantumContext.universal(r)
        checked.append(class_from_duals(m, ctx) == diagonal_class(ctx))
    assert report(5, all(checked), f"r=0..4 agree: {checked}")


def test_criterion_06_uniform_formula():
    cases = bad = 0
    for r in range(1, 4):
        ctx = QuantumContext.universal(r)
        for n in range(2, 6):
            for k in range(1, n):
                cases += 1
                if class_via_permutation_formula(uniform(k, n), ctx) != uniform_class_formula(k, n, ctx):
                    bad += 1
    assert report(6, bad == 0, f"{cases - bad}/{cases} uniform matroids U(d+1,n), n<=5, r<=3")


def test_criterion_07_cross_route():
    mats = {k: m for k, m in LIB.items() if m.n <= 5}
    bad = []
    for r in (1, 2, 3):
        ctx = QuantumContext.universal(r)
        for name, m in mats.items():
            if class_via_permutation_formula(m, ctx) != class_from_duals(m, ctx):
                bad.append(f"{name} r={r}")
    ok = len(mats) >= 25 and not bad
    assert report(7, ok, f"{len(mats)} library matroids x r=1,2,3, mismatches {bad}")


def test_criterion_08_nonequivariant():
    noneq = run_tasks(check_noneq, noneq_tasks())
    graph_ = [(n, r) for n, r in graph_tasks() if LIB[n].n <= 5 and r <= 2]
    graph = run_tasks(check_graph, graph_)
    bad = failures(noneq) + failures(graph)
    max_n = max(t[1].n for t in noneq_tasks())
    ok = not bad and max_n == 6
    assert report(8, ok, f"{len(noneq)} class checks (n<=6), {len(graph)} graph-closure checks, failures {bad}")


def test_criterion_09_mhbar_properties():
    props = run_tasks(check_mhbar_props, mhbar_prop_tasks(0))
    structured = run_tasks(check_structured, [(n, e, r, k) for k, (n, e) in enumerate(structured_exprs()) for r in (1, 2)])
    bad = failures(props) + failures(structured)
    assert report(9, not bad, f"{len(props)} property panels, {len(structured)} structured-vs-general, failures {bad}")


def test_criterion_10_series_parallel():
    tasks = serpar_tasks(seed=0, count=24, generic=True)
    assert all(m1.rows <= 3 and m1.cols <= 4 and m2.rows <= 3 and m2.cols <= 4 and r <= 2 for _, m1, m2, r in tasks)
    generic = run_tasks(check_serpar, tasks)
    mixed = run_tasks(check_serpar, serpar_tasks(seed=1))
    bad = failures(generic) + failures(mixed)
    ok = len(generic) >= 20 and not bad
    assert report(10, ok, f"{len(generic)} certified-generic pairs + {len(mixed)} sparse/mixed pairs, failures {bad}")


def test_criterion_11_valuativity():
    findings = run_tasks(check_valuativity, valuativity_tasks(seed=0))
    split = [f for f in findings if f.ok and f.detail != "single cell"]
    bad = failures(findings)
    ok = not bad and len(split) > 0
    assert report(11, ok, f"{len(findings)} directions, {len(split)} genuine subdivisions, failures {bad}")


def test_criterion_12_brion():
    tasks = brion_tasks(seed=0, per=5)
    findings = run_tasks(check_brion, tasks)
    bad = failures(findings)
    ok = not bad and all(len(t[2]) == 5 for t in tasks)
    assert report(12, ok, f"{len(findings)} (matroid, r) panels x 5 rational points, failures {bad}")
