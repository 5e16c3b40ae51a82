"""Upper-triangular forms toolkit.

Decomposes a square complex matrix T as N + Q where N is normal, carries the
eigenvalue distribution of T, and Q is nilpotent; applies holomorphic functions
through either triangular recurrences or contour quadrature; and runs the full
battery of identity checks relating the two parts.
"""

from _utforms import (
    Error,
    brown,
    calc,
    commuting_pair,
    decompose,
    eigenvalues,
    fk_determinant,
    fn_eval,
    generate,
    multiplicative_form,
    verify,
)

__all__ = [
    "Error",
    "brown",
    "calc",
    "commuting_pair",
    "decompose",
    "eigenvalues",
    "fk_determinant",
    "fn_eval",
    "generate",
    "multiplicative_form",
    "verify",
]
