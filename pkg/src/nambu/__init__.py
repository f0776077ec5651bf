"""Exact verification of Nambu-Poisson, Nambu-Jacobi and Filippov structures."""

__version__ = "0.1.0"

from .poly import Polynomial, monomial, partial
from .multivector import (
    Multivector,
    bracket_eval,
    contract,
    contract_all,
    hamiltonian,
    nj_bracket_eval,
    s_operator,
    schouten,
    wedge,
)
from .verify import (
    CheckConfig,
    Verdict,
    Witness,
    check_decomposable,
    check_fi_direct,
    check_ham_identity,
    check_involutive,
    check_jacobi_pair,
    check_nambu_jacobi,
    check_nambu_poisson,
    check_poisson,
    contraction_pair,
    theorem1_crosscheck,
)
from .filippov import (
    StructureConstants,
    bracket,
    check_filippov,
    check_problem_hypothesis,
    contract_algebra,
    search,
    to_linear_multivector,
)
from .parse import ParseError, parse_constants, parse_expression, parse_multivector, parse_polynomial
