"""Exact and p-adic arithmetic for cyclotomic Iwasawa theory.

Library plus ``iwa`` command line tool covering Stickelberger elements,
cyclotomic units, Euler factors, p-adic L-series with their mu/lambda
invariants, and characteristic ideals of presented torsion modules over
truncated Iwasawa algebras.
"""

from iwa.exact import (
    CharTable,
    CycloInt,
    CycloRat,
    bernoulli,
    cyclo_embed,
    cyclo_norm,
    gen_bernoulli,
)
from iwa.padic import (
    CoeffRing,
    NewtonInvariants,
    PadicApprox,
    embed_cyclo,
    hensel_root,
    newton_invariants,
    teichmuller,
)

__version__ = "0.1.0"
