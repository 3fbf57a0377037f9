from orbitcalc.algebra import ChowClass, QuantumContext, UniPoly
from orbitcalc.poly import Poly, parse_poly


def U(text: str, ctx: QuantumContext) -> UniPoly:
    """A polynomial in z over the coefficient ring of ``ctx``."""
    return UniPoly.from_poly(parse_poly(text, ("z",) + ctx.coeff_vars), "z", ctx.coeff_vars)


def P(text: str, vars) -> Poly:
    return parse_poly(text, tuple(vars))


def C(text: str, ctx: QuantumContext) -> Poly:
    """A coefficient-ring element."""
    return parse_poly(text, ctx.coeff_vars)


def cls(text: str, ctx: QuantumContext, n: int) -> ChowClass:
    names = tuple(f"H{i}" for i in range(1, n + 1)) + ctx.coeff_vars
    return ChowClass(ctx, n, parse_poly(text, names))


# acceptance criteria results, printed at the end of the run by conftest
CRITERIA: dict = {}


def report(number: int, ok: bool, detail: str) -> bool:
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    CRITERIA[number] = line
    print(line)
    return ok
