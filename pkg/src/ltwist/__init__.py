"""ltwist: exact verification workbench for L-values, divergent-series axioms,
twisted oscillator algebras on Fock space, and q-series identities."""

from ltwist.exactnum import (
    CycloNum,
    cyclo_arith,
    cyclo_embed,
    is_rational,
    rat,
    zeta,
)

__all__ = [
    "CycloNum",
    "cyclo_arith",
    "cyclo_embed",
    "is_rational",
    "rat",
    "zeta",
]

__version__ = "0.1.0"
