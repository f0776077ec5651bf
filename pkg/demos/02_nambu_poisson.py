"""
Which 3-vectors are Nambu-Poisson?
==================================

The canonical tensor passes; the sum of two canonical blocks on disjoint
coordinates does not, and the checker hands back a witness that can be fed
to the fundamental identity directly.
"""

from nambu import check_decomposable, check_fi_direct, check_nambu_poisson, check_poisson, theorem1_crosscheck
from nambu.multivector import contract
from nambu.parse import parse_multivector, parse_polynomial

canonical = parse_multivector("d1^d2^d3", 3)
v = check_nambu_poisson(canonical)
print(f"d1^d2^d3: passed={v.passed} after {v.checked} monomial pairs")

scaled = parse_multivector("x1*x2*d1^d2^d3", 3)
print("x1*x2*d1^d2^d3:", check_nambu_poisson(scaled).passed)

# %%
# Two blocks on disjoint coordinates
split = parse_multivector("d1^d2^d3 + d4^d5^d6", 6)
v = check_nambu_poisson(split)
w = v.witness
print("\nd1^d2^d3 + d4^d5^d6 passes:", v.passed)
print("  fs =", [str(f) for f in w.fs])
print("  [L_fs, L] =", w.residual)

# The same functions break the fundamental identity itself.
fi = check_fi_direct(split, w.fs, w.gs)
print("  fundamental identity residual on (fs, gs):", fi.witness.residual)

# It is not decomposable either: the Plucker relations fail.
print("  decomposable:", check_decomposable(split).passed)

# %%
# Contractions. Every single monomial gives a Poisson bivector, but a sum of
# two monomials does not, which is why the cross-check also tries sums.
for text in ("x1*x4", "x2*x5", "x1*x4 + x2*x5"):
    f = parse_polynomial(text, 6)
    print(f"  L_f for f = {text}: Poisson = {check_poisson(contract(split, f)).passed}")

t = theorem1_crosscheck(split)
print("\ncrosscheck consistent:", t.passed)
print("  failing contraction found:", t.details["failing_contraction"])

# %%
# Poisson bivectors, including the one from the regular-points remark
for text, dim in (("d1^(x1*d2)", 2), ("x3*d1^d2 + x1*d2^d3 + x2*d3^d1", 3), ("x2*d1^d2 + d2^d3", 3)):
    v = check_poisson(parse_multivector(text, dim))
    extra = "" if v.passed else f"  [L,L] = {v.witness.residual}"
    print(f"{text}: Poisson = {v.passed}{extra}")
