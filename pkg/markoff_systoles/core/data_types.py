from enum import Enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isfinite
from typing import Optional, Tuple, Union

from .exceptions import InvalidSlopeError, NonFiniteInputError


class VertexClass(Enum):
    SINK = "sink"
    MERGE = "merge"
    FORK = "fork"
    SOURCE = "source"

class EdgeOrientation(Enum):
    """Arrow on an edge as seen from one of its endpoints"""
    TOWARD = "toward"
    AWAY = "away"
    BOTH = "both"

class ArrowDirection(Enum):
    """Arrow on an edge (X, Y; Z, W): towards the vertex holding Z or W"""
    TOWARDS_Z = "towards_z"
    TOWARDS_W = "towards_w"
    BOTH_WAYS = "both_ways"

class GeodesicKind(Enum):
    TWO_SIDED = "two_sided"
    ONE_SIDED = "one_sided"

class BoundQuantity(Enum):
    COSH_HALF_SYS = "cosh_half_sys"
    COSH_SYS = "cosh_sys"
    LENGTH = "length"
    TRACE = "trace"

class NonFuchsianClass(Enum):
    ELLIPTIC_GUARANTEED = "elliptic_guaranteed"
    TRACE_BOUND = "trace_bound"

class Precision(Enum):
    DOUBLE = "double"
    HIGH = "high"

class OutputFormat(Enum):
    TEXT = "text"
    JSON = "json"
    DOT = "dot"


@dataclass(frozen=True)
class Slope:
    """A reduced rational p/q, or infinity stored as 1/0"""
    numerator: int
    denominator: int

    def __post_init__(self):
        p, q = self.numerator, self.denominator
        if p == 0 and q == 0:
            raise InvalidSlopeError("(0, 0) is not a slope")
        if q < 0:
            raise InvalidSlopeError(f"denominator must be non-negative, got {q}")
        if q == 0 and p != 1:
            raise InvalidSlopeError(f"infinity is stored as 1/0, got {p}/0")
        if gcd(abs(p), q) != 1:
            raise InvalidSlopeError(f"{p}/{q} is not reduced")

    @property
    def is_infinite(self) -> bool:
        return self.denominator == 0

    def as_fraction(self) -> Fraction:
        if self.is_infinite:
            raise InvalidSlopeError("infinity has no rational value")
        return Fraction(self.numerator, self.denominator)

    def sort_key(self) -> Tuple[int, Fraction]:
        # infinity is the greatest element of the extended order
        if self.is_infinite:
            return (1, Fraction(0))
        return (0, self.as_fraction())

    def __lt__(self, other: "Slope") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if self.is_infinite:
            return "inf"
        return f"{self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class Triangle:
    """A vertex of the dual tree: three pairwise Farey-neighbor slopes in canonical order"""
    regions: Tuple[Slope, Slope, Slope]

    def __post_init__(self):
        object.__setattr__(self, 'regions', tuple(sorted(self.regions, key=Slope.sort_key)))

    def __contains__(self, slope: Slope) -> bool:
        return slope in self.regions

    def other_regions(self, slope: Slope) -> Tuple[Slope, Slope]:
        return tuple(r for r in self.regions if r != slope)

    def __str__(self) -> str:
        return ",".join(str(r) for r in self.regions)


@dataclass(frozen=True)
class TreeEdge:
    """Edge e <-> (X, Y; Z, W) of the dual tree"""
    flanking: Tuple[Slope, Slope]
    opposite: Tuple[Slope, Slope]
    endpoints: Tuple[Triangle, Triangle]

    def __str__(self) -> str:
        x, y = self.flanking
        z, w = self.opposite
        return f"({x},{y};{z},{w})"


@dataclass(frozen=True)
class Word:
    """Freely reduced word over a, b, A = a^-1, B = b^-1"""
    letters: Tuple[str, ...] = ()

    def inverse(self) -> "Word":
        return Word(tuple(letter.swapcase() for letter in reversed(self.letters)))

    def __mul__(self, other: "Word") -> "Word":
        stack = list(self.letters)
        for letter in other.letters:
            if stack and stack[-1] == letter.swapcase():
                stack.pop()
            else:
                stack.append(letter)
        return Word(tuple(stack))

    def exponent_sums(self) -> Tuple[int, int]:
        alpha = sum(1 if c == 'a' else -1 for c in self.letters if c in 'aA')
        beta = sum(1 if c == 'b' else -1 for c in self.letters if c in 'bB')
        return alpha, beta

    def is_reduced(self) -> bool:
        return all(x != y.swapcase() for x, y in zip(self.letters, self.letters[1:]))

    def __str__(self) -> str:
        names = {'a': 'α', 'b': 'β', 'A': 'α⁻¹', 'B': 'β⁻¹'}
        return "".join(names[c] for c in self.letters) or "1"


def _check_finite(*values) -> None:
    for v in values:
        z = complex(v)
        if not (isfinite(z.real) and isfinite(z.imag)):
            raise NonFiniteInputError(f"non-finite value {v}")


@dataclass(frozen=True)
class MuParams:
    """mu = (lambda_1, lambda_2, lambda_3, s)"""
    lambda1: complex = 0
    lambda2: complex = 0
    lambda3: complex = 0
    s: complex = 0

    def __post_init__(self):
        _check_finite(self.lambda1, self.lambda2, self.lambda3, self.s)

    @property
    def lambdas(self) -> Tuple[complex, complex, complex]:
        return (self.lambda1, self.lambda2, self.lambda3)

    def lam(self, color: int) -> complex:
        return self.lambdas[color - 1]

    def as_tuple(self) -> Tuple[complex, complex, complex, complex]:
        return (self.lambda1, self.lambda2, self.lambda3, self.s)

    def is_real(self) -> bool:
        return all(complex(v).imag == 0 for v in self.as_tuple())


@dataclass(frozen=True)
class MarkoffTriple:
    """(x1, x2, x3), x_i attached to the color-i region"""
    x1: complex
    x2: complex
    x3: complex

    def coordinate(self, color: int) -> complex:
        return self.as_tuple()[color - 1]

    def replace(self, color: int, value: complex) -> "MarkoffTriple":
        values = list(self.as_tuple())
        values[color - 1] = value
        return MarkoffTriple(*values)

    def as_tuple(self) -> Tuple[complex, complex, complex]:
        return (self.x1, self.x2, self.x3)

    def min_modulus(self) -> float:
        return min(abs(v) for v in self.as_tuple())


@dataclass(frozen=True)
class CubicRoots:
    """Roots with multiplicity, sorted by modulus, real part, imaginary part (all descending)"""
    roots: Tuple[complex, complex, complex]
    residuals: Tuple[float, float, float]
    repeated: bool = False


@dataclass(frozen=True)
class RealRootCase:
    case: int
    roots: Tuple[float, ...]


@dataclass(frozen=True)
class VertexClassification:
    vertex: Triangle
    vertex_class: VertexClass
    orientations: Tuple[Tuple[TreeEdge, EdgeOrientation], ...]


@dataclass(frozen=True)
class SinkFound:
    vertex: Triangle
    triple: MarkoffTriple
    path: Tuple[Triangle, ...]

@dataclass(frozen=True)
class SmallRegion:
    slope: Slope
    value: complex
    path: Tuple[Triangle, ...]

@dataclass(frozen=True)
class DepthExceeded:
    path: Tuple[Triangle, ...]

ReductionOutcome = Union[SinkFound, SmallRegion, DepthExceeded]


@dataclass(frozen=True)
class GeodesicBoundary:
    length: float

@dataclass(frozen=True)
class Cusp:
    pass

@dataclass(frozen=True)
class ConeAngle:
    angle: float

BoundaryComponent = Union[GeodesicBoundary, Cusp, ConeAngle]


@dataclass(frozen=True)
class SystoleBound:
    quantity: BoundQuantity
    value: float
    context: str = ""


@dataclass(frozen=True)
class SpherePoint:
    triple: MarkoffTriple
    mu: MuParams
    residual: complex
    on_variety: bool


@dataclass(frozen=True)
class DZeroBranch:
    a: complex
    b: complex
    c: complex
    holds: bool


@dataclass(frozen=True)
class NonFuchsianReport:
    k: float
    classification: NonFuchsianClass
    trace_bound: Optional[float] = None
    small_region_fired: Optional[bool] = None
    outcome: Optional[object] = field(default=None, compare=False)
