"""Exact simultaneous triangularization of matrix semigroups over QQ, GF(p) and the rational quaternions."""
from .closure import GeneratorSet, algebra_span, commutant, semigroup_closure
from .linalg import Chain, Matrix, Subspace, char_poly, kernel, singleton_spectrum
from .scalars import HH, QQ, PrimeField, Quaternion, ring_from_tag
from .triangularize import (
    TnFamily,
    Verdict,
    Witness,
    hyperinvariant_subspace,
    irreducibility_test,
    kaplansky_chain,
    kolchin_chain,
    levitzki_chain,
    tn_triangularize,
    triangularize_general,
    verify_chain,
)

__all__ = [
    "GeneratorSet",
    "algebra_span",
    "commutant",
    "semigroup_closure",
    "Chain",
    "Matrix",
    "Subspace",
    "char_poly",
    "kernel",
    "singleton_spectrum",
    "HH",
    "QQ",
    "PrimeField",
    "Quaternion",
    "ring_from_tag",
    "TnFamily",
    "Verdict",
    "Witness",
    "hyperinvariant_subspace",
    "irreducibility_test",
    "kaplansky_chain",
    "kolchin_chain",
    "levitzki_chain",
    "tn_triangularize",
    "triangularize_general",
    "verify_chain",
]
