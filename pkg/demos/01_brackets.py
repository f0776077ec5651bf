"""
Polynomials, multivectors and the Nambu bracket
===============================================

A walk through the exterior algebra layer: build the canonical 3-vector,
contract it with functions, and watch the Jacobian determinant appear.
"""

from nambu import Multivector, Polynomial, bracket_eval, contract, hamiltonian, schouten, wedge
from nambu.parse import parse_multivector, parse_polynomial

# Polynomials are exact: coefficients are fractions, never floats.
x1, x2, x3 = (Polynomial.var(3, i) for i in (1, 2, 3))
p = (x1 + 1) * (x1 - 1)
print("(x1 + 1)(x1 - 1) =", p)
print("d/dx1 of x1^2*x2 =", (x1**2 * x2).partial(1))

# d1^d2^d3 is the tensor behind the determinant bracket.
L = Multivector.basis(3, 1, 2, 3)
print("L =", L)

# Contraction puts df in the first slot, so x2 picks up a sign.
print("L_x1 =", contract(L, x1))
print("L_x2 =", contract(L, x2))

# The bracket of three functions is the Jacobian determinant.
print("{x1, x2, x3} =", bracket_eval(L, [x1, x2, x3]))
print("{x2, x1, x3} =", bracket_eval(L, [x2, x1, x3]))
print("{x1^2, x2, x3} =", bracket_eval(L, [x1**2, x2, x3]))

# Contracting with two functions leaves a hamiltonian vector field.
print("hamiltonian field of (x1, x2):", hamiltonian(L, [x1, x2]))

# Wedges sort their indices and keep track of the sign.
print("d2 ^ d1 =", wedge(Multivector.basis(3, 2), Multivector.basis(3, 1)))

# The Schouten bracket on a 4-dimensional example: only [d1, x1 d3] survives.
P = parse_multivector("d1^d2", 4)
Q = parse_multivector("x1*d3^d4", 4)
print("[d1^d2, x1*d3^d4] =", schouten(P, Q))

# On a bivector and a function the bracket is minus the contraction.
G = parse_multivector("x2*d1^d2 + d2^d3", 3)
f = parse_polynomial("x1*x3", 3)
print("[G, f]  =", schouten(G, Multivector.scalar(f)))
print("-G_f    =", -contract(G, f))
