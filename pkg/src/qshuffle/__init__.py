"""Exact computations with quantum shuffle algebras, Feigin-Odesskii algebras and toroidal brackets."""
from .cartan import (CartanDatum, CartanError, kostant_dim, load, loop_kostant_dim, min_parts, positive_roots,
                     preset, validate)
from .coeff import HLaurent, PrecisionError, QLaurent, QRat, qbinom, qint, subst_exp
from .current import FOElem, fo_graded_rank, fo_product, fo_word_image
from .currentpair import residue_pair, tpair, windowed_canonical, windowed_gram
from .pairing import canonical_tensor, nondegenerate, pairing_rank, valuation_of
from .shuffle import ShuffleVec, graded_rank, serre_element, shuffle_product, word_image
from .toroidal import a11_defect, jacobi_check, t_bracket

__version__ = "0.1.0"

__all__ = [
    "CartanDatum", "CartanError", "kostant_dim", "loop_kostant_dim", "min_parts", "positive_roots", "preset",
    "load", "validate",
    "HLaurent", "PrecisionError", "QLaurent", "QRat", "qbinom", "qint", "subst_exp",
    "FOElem", "fo_graded_rank", "fo_product", "fo_word_image",
    "residue_pair", "tpair", "windowed_canonical", "windowed_gram",
    "canonical_tensor", "nondegenerate", "pairing_rank", "valuation_of",
    "ShuffleVec", "graded_rank", "serre_element", "shuffle_product", "word_image",
    "a11_defect", "jacobi_check", "t_bracket",
]
