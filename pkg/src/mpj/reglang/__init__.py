"""Regular languages as expressions and as automata."""

from .costa import CostaForm, CostaFormError, costa_K, costa_lang
from .dfa import Dfa, complement, dfa_equal, minimize, product
from .expr import (Complement, Concat, CostaLang, ExprError, Factor, Intersection, LangExpr, LBlock,
                   Letters, Prefix, RLang, ShuffleIdeal, SingleWord, SLang, Star, Suffix, ThresholdBlock,
                   Union, alpha_decomposition, block, compile_expr, empty_language, from_json, letters_star,
                   pretty, sigma_star, threshold_normal_form, to_json)
from .parse import ParseError, parse_regex
from .pt import is_k_pt


def member(e: LangExpr, w) -> bool:
    return e.member(w)


compile = compile_expr  # noqa: A001  (mirrors the operation name used in docs)
