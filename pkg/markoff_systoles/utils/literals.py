"""Plain-text literals: complex numbers "a", "a+bi", "a-bi", "bi"; slopes "p/q" or "inf"; triangles "r,s,t" """

import math
from typing import List, Optional, Sequence

from ..core.data_types import Slope, Triangle
from ..core.exceptions import InvalidInputError, MarkoffError
from ..farey.farey_tree import make_triangle, slope_from_label


def parse_complex(text: str) -> complex:
    """'3', '-2.5', '2+i', '2-0.5i', '-i', '1e-3+2e2i'"""
    cleaned = text.strip().replace(' ', '').replace('−', '-')
    if not cleaned:
        raise InvalidInputError("empty complex literal")
    try:
        value = complex(cleaned.replace('i', 'j'))
    except ValueError:
        raise InvalidInputError(f"'{text}' is not a complex literal (expected a, a+bi or a-bi)")
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise InvalidInputError(f"'{text}' is not finite")
    return value


def parse_complex_list(text: str, length: Optional[int] = None) -> List[complex]:
    """Comma-separated complex literals, e.g. '8,8,8,-28'"""
    values = [parse_complex(part) for part in text.split(',')]
    if length is not None and len(values) != length:
        raise InvalidInputError(f"expected {length} comma-separated values, got {len(values)} in '{text}'")
    return values


def format_number(value, digits: int = 12) -> str:
    """Real values print as reals, complex values as a+bi"""
    z = complex(value)
    if z.imag == 0:
        return f"{z.real:.{digits}g}"
    if z.real == 0:
        return f"{z.imag:.{digits}g}i"
    sign = '+' if z.imag > 0 else '-'
    return f"{z.real:.{digits}g}{sign}{abs(z.imag):.{digits}g}i"


def format_tuple(values: Sequence, digits: int = 12) -> str:
    return "(" + ", ".join(format_number(v, digits) for v in values) + ")"


def parse_slope(text: str) -> Slope:
    try:
        return slope_from_label(text)
    except MarkoffError as e:
        raise InvalidInputError(str(e)) from e


def parse_triangle(text: str) -> Triangle:
    """Three comma-separated slopes, pairwise Farey neighbors"""
    parts = text.split(',')
    if len(parts) != 3:
        raise InvalidInputError(f"a vertex has three regions, got '{text}'")
    try:
        return make_triangle(*(slope_from_label(p) for p in parts))
    except MarkoffError as e:
        raise InvalidInputError(str(e)) from e
