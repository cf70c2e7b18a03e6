"""Word maps on classical groups: width-two factorizations and their checks."""

from .exactnum import CycScalar, ExactMatrix, ExactPoly, cyclotomic_poly, field_degree_over_Q
from .factorize import (FactorizationCert, PreimageNotFound, central_two_squares, factorize_compact,
                        verify_certificate)
from .goto import build_goto, solve_commutator
from .groups import GroupCtx, conj_in_group, member, random_element, torus_reduce
from .oracle import product_coverage, word_image
from .principal import build_embedding, sym_power
from .search import prop41_search, sample_discriminant_squares, su2_preimage
from .wordlang import Word, evaluate, parse_word, print_word

__all__ = [
    "CycScalar", "ExactMatrix", "ExactPoly", "FactorizationCert", "GroupCtx", "PreimageNotFound", "Word",
    "build_embedding", "build_goto", "central_two_squares", "conj_in_group", "cyclotomic_poly", "evaluate",
    "factorize_compact", "field_degree_over_Q", "member", "parse_word", "print_word", "product_coverage",
    "prop41_search", "random_element", "sample_discriminant_squares", "solve_commutator", "su2_preimage",
    "sym_power", "torus_reduce", "verify_certificate", "word_image",
]
__version__ = "0.1.0"
