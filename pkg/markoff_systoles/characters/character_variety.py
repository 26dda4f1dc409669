"""Markoff maps as characters: the one-holed torus, the four-holed sphere and N_3"""

import cmath
import logging
import math
from functools import reduce
from typing import Iterator, Optional, Tuple, Union

import numpy as np

from ..algebra.markoff_map import MarkoffMap, residual_scale, vertex_residual
from ..config.settings import load_config
from ..core.data_models import RunConfig, VerificationReport
from ..core.data_types import DZeroBranch, MarkoffTriple, MuParams, Slope, SpherePoint, Word
from ..core.exceptions import OffVarietyError, ReducibleTripleError
from ..farey.farey_tree import INFINITY, reduce_slope, slope_word

logger = logging.getLogger(__name__)

REDUCIBLE_TOLERANCE = 1e-10
N3_TOLERANCE = 1e-10
UNIMODULAR_TOLERANCE = 1e-12

# t^2 = 3 + sqrt(17) solves t^4 - 6t^2 - 8 = 0
N3_EXTREMAL_T = math.sqrt(3 + math.sqrt(17))


def torus_mu(k: complex) -> MuParams:
    """Parameters (0, 0, 0, k + 2) of the maps coming from the commutator-trace-k slice"""
    if k == 2:
        logger.warning("k = 2 gives mu = (0, 0, 0, 4), which has a double dominant root")
    return MuParams(0, 0, 0, k + 2)


def commutator_defect(x: complex, y: complex, z: complex) -> complex:
    """x^2 + y^2 + z^2 - xyz, equal to tr[A, B] + 2"""
    return x * x + y * y + z * z - x * y * z


def sl2_inverse(m: np.ndarray) -> np.ndarray:
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex)


def is_unimodular(m: np.ndarray, tolerance: float = UNIMODULAR_TOLERANCE) -> bool:
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return abs(det - 1) <= tolerance * max(1.0, float(np.max(np.abs(m))) ** 2)


def _xi(z: complex) -> complex:
    """Root of xi^2 - z xi + 1 with |xi| >= 1, ties to positive imaginary part"""
    root = cmath.sqrt(z * z - 4)
    candidates = [(z + root) / 2, (z - root) / 2]
    return max(candidates, key=lambda w: (round(abs(w), 12), w.imag))


def realize_matrices(x: complex, y: complex, z: complex) -> Tuple[np.ndarray, np.ndarray]:
    """SL(2, C) matrices A, B with tr A = x, tr B = y and tr AB = z"""
    defect = commutator_defect(x, y, z)
    if abs(defect - 4) <= REDUCIBLE_TOLERANCE * max(1.0, abs(defect)):
        raise ReducibleTripleError(f"({x}, {y}, {z}) has commutator trace 2")
    xi = _xi(complex(z))
    A = np.array([[x, -1], [1, 0]], dtype=complex)
    B = np.array([[0, xi], [-1 / xi, y]], dtype=complex)
    return A, B


def word_matrix(A: np.ndarray, B: np.ndarray, w: Word) -> np.ndarray:
    matrices = {'a': A, 'b': B, 'A': sl2_inverse(A), 'B': sl2_inverse(B)}
    return reduce(np.matmul, (matrices[letter] for letter in w.letters), np.eye(2, dtype=complex))


def word_trace(A: np.ndarray, B: np.ndarray, w: Word) -> complex:
    return complex(np.trace(word_matrix(A, B, w)))


def commutator_trace(A: np.ndarray, B: np.ndarray) -> complex:
    return word_trace(A, B, Word(('a', 'b', 'A', 'B')))


def gt_map(a: complex, b: complex, c: complex, d: complex) -> MuParams:
    """(ab + cd, ad + bc, ac + bd, 4 - a^2 - b^2 - c^2 - d^2 - abcd)"""
    return MuParams(
        a * b + c * d,
        a * d + b * c,
        a * c + b * d,
        4 - a * a - b * b - c * c - d * d - a * b * c * d,
    )


def sphere_rep_to_markoff(x: complex, y: complex, z: complex,
                          boundary: Tuple[complex, complex, complex, complex],
                          tolerance: float = 1e-10) -> SpherePoint:
    """-(x, y, z) as a GT(boundary)-Markoff triple"""
    triple = MarkoffTriple(-x, -y, -z)
    mu = gt_map(*boundary)
    residual = vertex_residual(triple, mu)
    on_variety = abs(residual) <= tolerance * residual_scale(triple, mu)
    return SpherePoint(triple=triple, mu=mu, residual=residual, on_variety=on_variety)


def n3_defect(a: complex, b: complex, c: complex, d: complex) -> complex:
    return a * a + b * b + c * c - a * b * c * d / 2 - 4


def n3_check(a: complex, b: complex, c: complex, d: complex, tolerance: float = N3_TOLERANCE) -> bool:
    """Membership in a^2 + b^2 + c^2 - abc d/2 = 4"""
    scale = max(1.0, abs(a) ** 2, abs(b) ** 2, abs(c) ** 2, abs(a * b * c * d) / 2)
    return abs(n3_defect(a, b, c, d)) <= tolerance * scale


def n3_extremal_character() -> Tuple[complex, complex, complex, complex]:
    t = N3_EXTREMAL_T
    return (1j * t, 1j * t, 1j * t, -1j * t)


def n3_to_markoff(a: complex, b: complex, c: complex, d: complex) -> Union[Tuple[MarkoffTriple, MuParams], DZeroBranch]:
    """(cd/2, ad/2, bd/2) as a (0, 0, 0, d^2)-Markoff triple; d = 0 only leaves a^2 + b^2 + c^2 = 4"""
    if not n3_check(a, b, c, d):
        raise OffVarietyError(f"({a}, {b}, {c}, {d}) is not an N_3 character (defect {n3_defect(a, b, c, d)})")
    if d == 0:
        holds = abs(a * a + b * b + c * c - 4) <= N3_TOLERANCE * max(1.0, abs(a) ** 2, abs(b) ** 2, abs(c) ** 2)
        return DZeroBranch(a=a, b=b, c=c, holds=holds)
    return MarkoffTriple(c * d / 2, a * d / 2, b * d / 2), MuParams(0, 0, 0, d * d)


def slopes_up_to(max_denominator: int) -> Iterator[Slope]:
    """infinity, then every p/q with 0 < q <= max_denominator and |p| <= q"""
    yield INFINITY
    for q in range(1, max_denominator + 1):
        for p in range(-q, q + 1):
            if math.gcd(p, q) == 1:
                yield reduce_slope(p, q)


def _random_irreducible_triple(rng: np.random.Generator) -> Tuple[complex, complex, complex]:
    while True:
        x, y, z = rng.uniform(2.1, 4.0, 3) + 1j * rng.uniform(-1.0, 1.0, 3)
        if abs(commutator_defect(x, y, z) - 4) > 1e-6:
            return complex(x), complex(y), complex(z)


def cross_check(x: complex, y: complex, z: complex, max_denominator: int = 34,
                config: Optional[RunConfig] = None) -> Tuple[float, Optional[Slope]]:
    """Worst relative gap between matrix word traces and Markoff recursion values"""
    A, B = realize_matrices(x, y, z)
    mu = torus_mu(commutator_defect(x, y, z) - 2)
    phi = MarkoffMap(mu, MarkoffTriple(x, y, z), config=config)
    worst, worst_slope = 0.0, None
    for s in slopes_up_to(max_denominator):
        value = phi.region_value(s)
        gap = abs(word_trace(A, B, slope_word(s)) - value) / max(1.0, abs(value))
        if gap > worst:
            worst, worst_slope = gap, s
    return worst, worst_slope


def oracle_cross_check(n_triples: int = 100, max_denominator: int = 34, seed: Optional[int] = None,
                       tolerance: float = 1e-8, config: Optional[RunConfig] = None) -> VerificationReport:
    """Compare tr(word(s)) with phi(s) on random irreducible triples"""
    config = config or load_config(use_environment=False)
    seed = config.seed if seed is None else seed
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    n_slopes = sum(1 for _ in slopes_up_to(max_denominator))
    logger.info(f"oracle: {n_triples} triples x {n_slopes} slopes")

    worst, witness = 0.0, {}
    for i in range(n_triples):
        x, y, z = _random_irreducible_triple(rng)
        gap, slope = cross_check(x, y, z, max_denominator, config=config)
        logger.debug(f"triple {i}: worst relative gap {gap:.3e}")
        if gap >= worst:
            worst = gap
            witness = {'x': [x.real, x.imag], 'y': [y.real, y.imag], 'z': [z.real, z.imag]}
            if slope is not None:
                witness['slope'] = [float(slope.numerator), float(slope.denominator)]

    margin = tolerance - worst
    passed = margin >= 0
    if not passed:
        logger.warning(f"oracle: relative gap {worst:.3e} exceeds {tolerance:.1e}")
    return VerificationReport(
        theorem='oracle',
        samples=n_triples * n_slopes,
        worst_margin=margin,
        witness=witness,
        tolerance=0.0,
        passed=passed,
        seed=seed,
        bound=tolerance,
        details={'worst_relative_gap': worst},
    )
