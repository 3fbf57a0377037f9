"""The operator [M]_hbar on small examples, evaluated two independent ways."""

from orbitcalc.algebra import QuantumContext
from orbitcalc.classes import class_from_duals, class_via_permutation_formula, diagonal_class
from orbitcalc.matroid import general_matrix, matroid_from_matrix, uniform
from orbitcalc.quantum import identity_expr, kronecker_dual, mhbar, mhbar_general, uniform_expr

ctx = QuantumContext.universal(1)
z = ctx.z()

# two free points: [I_2](H, H) is the quantum square of z
print("[I_2](H,H)     =", mhbar(identity_expr(2), [z, z], ctx).to_poly())

# the structured evaluation of U(2,4) against the flag-sum evaluation
fs = [z, ctx.z(2), ctx.one(), z]
a = mhbar(uniform_expr(2, 4), fs, ctx)
b = mhbar_general(uniform(2, 4), fs, ctx)
print("[U(2,4)]       =", a.to_poly(), "| strategies agree:", a == b)

# a Kronecker dual is one coefficient of [M]_hbar
print("dual of U(2,3) at (H,H,H):", kronecker_dual(uniform(2, 3), [z] * 3, ctx))

# the diagonal in P^r x P^r from three routes
for r in (1, 2, 3):
    c = QuantumContext.universal(r)
    m = matroid_from_matrix(general_matrix(1, 2))
    duals = class_from_duals(m, c)
    print(f"r={r}: diagonal {duals}  (permutation formula agrees: {class_via_permutation_formula(m, c) == duals},"
          f" closed form agrees: {diagonal_class(c) == duals})")
