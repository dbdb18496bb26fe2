"""Exact-arithmetic engine for multiplier bimonoids and comonoids in
braided categories of graded vector spaces.

Everything is checked, nothing is assumed: semigroup certificates,
morphism flags, composition identities, and the two-sided axiom
equivalence are all verified by exact linear algebra over Q or F_p.
"""

__version__ = "0.1.0"
