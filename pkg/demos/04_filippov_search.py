"""
Filippov algebras and the contraction question
==============================================

If every contraction [x, ., ..., .] of an n-bracket is a Filippov
(n-1)-bracket, must the n-bracket be Filippov?  Nobody knows.  This script
checks the classic 4-dimensional ternary algebra and then runs the
brute-force search over small coefficient spaces.  A counterexample, if one
turns up, is printed in full.
"""

import time

from nambu import StructureConstants, check_filippov, check_problem_hypothesis, contract_algebra, search
from nambu.filippov import format_constants, format_vector, to_linear_multivector
from nambu.parse import parse_constants

A = parse_constants(
    """
    c[4; 1,2,3] = 1
    c[3; 1,2,4] = -1
    c[2; 1,3,4] = 1
    c[1; 2,3,4] = -1
    """,
    4,
)
print("ternary algebra Filippov:", check_filippov(A).passed)
print("all contractions Filippov:", check_problem_hypothesis(A).passed)
print("contraction with e4:")
print(format_constants(contract_algebra(A, (0, 0, 0, 1))))
print("as a linear 3-vector field:", to_linear_multivector(A))

# %%
# A bracket that fails, with the violating basis tuple
S = StructureConstants(4, 3, {(1, (1, 2, 3)): 1, (4, (1, 2, 4)): 1})
v = check_filippov(S)
print("\n[e1,e2,e3]=e1, [e1,e2,e4]=e4 Filippov:", v.passed)
print("  witness", v.witness.label, "residual", format_vector(v.witness.residual))
h = check_problem_hypothesis(S)
print("  contractions all Filippov:", h.passed, " first bad x:", format_vector(h.details["x"]))

# %%
# The search.  With m = n = 3 there are three free constants c[k; 1,2,3].
t0 = time.perf_counter()
print()
print(search(3, 3, (-1, 0, 1)).summary())

# All 2^16 zero/one assignments in dimension 4.
report = search(4, 3, (0, 1), workers=2)
print(report.summary())

# A seeded random sample with signs.
print(search(4, 3, (-1, 0, 1), mode="random", seed=1, count=20000).summary())
print(f"\nsearch time {time.perf_counter() - t0:.1f}s")
