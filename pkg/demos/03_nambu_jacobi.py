"""
Nambu-Jacobi pairs
==================

A pair (D, G) of an n-vector and an (n-1)-vector defines the bracket
D(f1..fn) + sum_i (-1)^(i+1) f_i G(..without f_i..).  The normal form
(d1^d2^d3, d1^d2) passes; tilting G breaks it.
"""

import time

from nambu import check_jacobi_pair, check_nambu_jacobi, contraction_pair
from nambu.multivector import contract, nj_bracket_eval
from nambu.parse import parse_multivector
from nambu.poly import Polynomial, monomials_up_to
from nambu.verify import n3_identities

D = parse_multivector("d1^d2^d3", 3)
G = parse_multivector("d1^d2", 3)
x1, x2, x3 = (Polynomial.var(3, i) for i in (1, 2, 3))

print("{x1, x2, x3} =", nj_bracket_eval(D, G, [x1, x2, x3]))
print("G == D_x3:", contract(D, x3) == G)

t0 = time.perf_counter()
v = check_nambu_jacobi(D, G)
print(f"normal form passes: {v.passed} ({v.checked} residuals, {time.perf_counter() - t0:.1f}s)")

# %%
# Fixing one argument gives an order-2 pair (D_f + f G, -G_f).
for m in monomials_up_to(3, 2):
    f = Polynomial.from_monomial(3, m)
    D1, G1 = contraction_pair(D, G, f)
    ok = check_jacobi_pair(D1, G1).passed
    zero = all(r.is_zero() for r in n3_identities(D, G, f).values())
    print(f"  f = {str(f):6}  pair = ({D1}, {G1})  Jacobi: {ok}  intermediate identities vanish: {zero}")

# %%
# A pair that is not Nambu-Jacobi
bad = parse_multivector("d2^d3 + x1*d1^d2", 3)
v = check_nambu_jacobi(D, bad)
w = v.witness
print("\n(d1^d2^d3, d2^d3 + x1*d1^d2) passes:", v.passed)
print("  fs =", [str(f) for f in w.fs], " gs =", [str(g) for g in w.gs], " residual =", w.residual)
