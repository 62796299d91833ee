"""Linear codes from pairs of weakly regular plateaued functions over F_{p^m}."""
from .codes import (BY_CLASS, CONVOLVE, ENUMERATE, CodeReport, DefiningSet, PuncturedSet, build_defining_set,
                    certify_griesmer, certify_minimal, codeword_weight, dual_distance, dual_distance_at_least_3,
                    minimal_by_cover_scan, puncture, weight_distribution)
from .errors import *  # noqa: F401,F403
from .field import FieldSpec, format_element, make_field, parse_element, trace
from .plateaued import (NEITHER, WRP, WRPB, PFunction, PlateauedProfile, classify, eval_descriptor, from_values,
                        walsh_transform)
from .predict import (applicable_branches, minimality_threshold, n0_closed_form, n0_table, predicted_distribution,
                      punctured_report)
from .search import SearchSpec, search

__version__ = "0.1.0"
