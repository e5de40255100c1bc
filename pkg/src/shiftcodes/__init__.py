"""Shifts of finite type, sofic shifts and sliding block codes: presentations,
languages, spectral invariants, decision procedures for open and
bi-continuing codes, and the marker construction of factor codes."""

from .codes import SlidingBlockCode, apply, compose, is_factor_onto
from .construct import build_plan, construct_factor, marker_factor_code, reduce_periodic
from .errors import ShiftError
from .language import classify, find_synchronizing_word, in_language, words
from .presentations import (cycle, edge_shift, even_shift, from_matrix, full_shift,
                            golden_mean, higher_block, labeled, vertex_shift)
from .spectral import entropy, entropy_bracket, periodic_condition, periodic_profile
from .verify import (certify, closing_delay, continuing_retract, factor_existence,
                     open_decision, search_retract)

__version__ = "0.1.0"
