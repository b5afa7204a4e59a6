"""Repair of regular expressions vulnerable to ReDoS by template search."""

import sys

__version__ = "0.1.0"

# the matcher and the analyses recurse along the expression and the input
if sys.getrecursionlimit() < 10_000:
    sys.setrecursionlimit(10_000)

from .ast import Template  # noqa: E402
from .ltp import check_ltp  # noqa: E402
from .matcher import accepts, step, time  # noqa: E402
from .parser import RegexSyntaxError, parse, parse_template  # noqa: E402
from .printer import to_text  # noqa: E402
from .repair import RepairConfig, RepairResult, localize, repair  # noqa: E402
from .sampling import ExampleSet, sample_examples, similarity, widen_char_sets  # noqa: E402

__all__ = [
    "ExampleSet",
    "RegexSyntaxError",
    "RepairConfig",
    "RepairResult",
    "Template",
    "accepts",
    "check_ltp",
    "localize",
    "parse",
    "parse_template",
    "repair",
    "sample_examples",
    "similarity",
    "step",
    "time",
    "to_text",
    "widen_char_sets",
]
