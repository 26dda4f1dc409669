import logging
from functools import cmp_to_key
from math import isfinite
from typing import List, Sequence

import mpmath
import numpy as np

from ..core.data_types import CubicRoots, RealRootCase
from ..core.exceptions import DomainError, NonFiniteInputError, ValidationError

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-10
REPEATED_ROOT_GAP = 1e-7
DISCRIMINANT_TOLERANCE = 1e-12
MODULUS_TIE = 1e-12
HIGH_PRECISION_DPS = 50


def _evaluate(c2, c1, c0, x):
    return ((x + c2) * x + c1) * x + c0


def _polish(c2, c1, c0, x: complex, max_iter: int = 50) -> complex:
    """Newton iteration, stopped as soon as the residual stops decreasing"""
    value = _evaluate(c2, c1, c0, x)
    for _ in range(max_iter):
        derivative = (3 * x + 2 * c2) * x + c1
        if derivative == 0:
            break
        candidate = x - value / derivative
        candidate_value = _evaluate(c2, c1, c0, candidate)
        if abs(candidate_value) >= abs(value):
            break
        x, value = candidate, candidate_value
        if value == 0:
            break
    return x


def _compare_roots(u, v) -> int:
    mu, mv = abs(u), abs(v)
    if abs(mu - mv) > MODULUS_TIE * max(1.0, float(mu), float(mv)):
        return -1 if mu > mv else 1
    for a, b in ((u.real, v.real), (u.imag, v.imag)):
        if abs(a - b) > MODULUS_TIE * max(1.0, float(mu)):
            return -1 if a > b else 1
    return 0


def _sorted_roots(roots: Sequence) -> List:
    return sorted(roots, key=cmp_to_key(_compare_roots))


def _discriminant(c2, c1, c0):
    """Discriminant of X^3 + c2 X^2 + c1 X + c0 and the modulus of its largest term"""
    terms = (18 * c2 * c1 * c0, -4 * c2 ** 3 * c0, c2 * c2 * c1 * c1, -4 * c1 ** 3, -27 * c0 * c0)
    return sum(terms), max(abs(t) for t in terms)


def _snap_repeated(c2, c1, c0, roots: List[complex]) -> List[complex]:
    """Closed form for a double or triple root: (X - r)^2 (X - s)"""
    spread = c2 * c2 - 3 * c1
    if abs(spread) <= REPEATED_ROOT_GAP * max(1.0, abs(c2) ** 2):
        r = -c2 / 3
        return [r, r, r]
    r = (9 * c0 - c2 * c1) / (2 * spread)
    s = -c2 - 2 * r
    return [r, r, s]


def _check_finite(*values) -> None:
    for v in values:
        z = complex(v)
        if not (isfinite(z.real) and isfinite(z.imag)):
            raise NonFiniteInputError(f"coefficient {v} is not finite")


def solve_monic_cubic(c2: complex, c1: complex, c0: complex,
                      high_precision: bool = False, dps: int = HIGH_PRECISION_DPS) -> CubicRoots:
    """Roots of X^3 + c2 X^2 + c1 X + c0 with multiplicity, polished to residual tolerance"""
    _check_finite(c2, c1, c0)
    if high_precision:
        return _solve_high_precision(c2, c1, c0, dps)

    c2, c1, c0 = complex(c2), complex(c1), complex(c0)
    roots = [_polish(c2, c1, c0, complex(r)) for r in np.roots([1.0, c2, c1, c0])]

    repeated = False
    gaps = [abs(roots[i] - roots[j]) for i in range(3) for j in range(i + 1, 3)]
    scale = max(1.0, max(abs(r) for r in roots))
    discriminant, size = _discriminant(c2, c1, c0)
    # close roots are only merged when the discriminant vanishes relative to its terms
    if min(gaps) <= REPEATED_ROOT_GAP * scale and abs(discriminant) <= DISCRIMINANT_TOLERANCE * size:
        snapped = _snap_repeated(c2, c1, c0, roots)
        if max(abs(_evaluate(c2, c1, c0, r)) for r in snapped) <= RESIDUAL_TOLERANCE * scale ** 3:
            roots, repeated = snapped, True
            # X^3 - 3X^2 has the double root 0 by construction
            log = logger.debug if c0 == 0 else logger.warning
            log(f"Repeated root for X^3 + ({c2})X^2 + ({c1})X + ({c0}): {roots}")

    roots = _sorted_roots(roots)
    residuals = tuple(float(abs(_evaluate(c2, c1, c0, r))) for r in roots)
    for r, res in zip(roots, residuals):
        if res > RESIDUAL_TOLERANCE * max(1.0, abs(r) ** 3):
            raise ValidationError(f"root {r} has residual {res}")
    return CubicRoots(roots=tuple(roots), residuals=residuals, repeated=repeated)


def _solve_high_precision(c2, c1, c0, dps: int) -> CubicRoots:
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpc(1), mpmath.mpc(c2), mpmath.mpc(c1), mpmath.mpc(c0)]
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=2 * dps)
        roots = [mpmath.mpc(r) for r in roots]
        roots = _sorted_roots(roots)
        residuals = tuple(float(abs(mpmath.polyval(coeffs, r))) for r in roots)
        gaps = [abs(roots[i] - roots[j]) for i in range(3) for j in range(i + 1, 3)]
        repeated = min(gaps) <= mpmath.mpf(10) ** (-dps // 2)
    return CubicRoots(roots=tuple(roots), residuals=residuals, repeated=bool(repeated))


def dominant_root(a: complex, high_precision: bool = False) -> complex:
    """t_a: root of maximal modulus of X^3 - 3X^2 + a"""
    return solve_monic_cubic(-3, 0, a, high_precision=high_precision).roots[0]


def tau(a: complex, high_precision: bool = False) -> complex:
    """tau_a: smallest-modulus root of -a X^3 + 3X - 1, equal to 1 / t_a"""
    if a == 0:
        return mpmath.mpf(1) / 3 if high_precision else 1 / 3
    x = 1 / dominant_root(a, high_precision=high_precision)
    if high_precision:
        return x
    a = complex(a)
    for _ in range(3):
        derivative = 3 - 3 * a * x * x
        if derivative == 0:
            break
        x = x - (-a * x ** 3 + 3 * x - 1) / derivative
    return x


def _real_roots(mu: float) -> List[float]:
    """Distinct real roots of X^3 - 3X^2 + mu, in decreasing order"""
    if mu == 0:
        return [3.0, 0.0]
    if mu == 4:
        return [2.0, -1.0]
    roots = solve_monic_cubic(-3, 0, mu).roots
    if 27 * mu * (4 - mu) > 0:
        real = [r.real for r in roots]
    else:
        real = [min(roots, key=lambda r: abs(r.imag)).real]
    return sorted(real, reverse=True)


def largest_real_root(mu: float) -> float:
    """t'_mu: the real root of X^3 - 3X^2 + mu of largest absolute value, ties to the positive one"""
    _check_finite(mu)
    return max(_real_roots(float(mu)), key=lambda r: (abs(r), r))


def classify_real_roots(mu: float) -> RealRootCase:
    """The five cases of the real roots of X^3 - 3X^2 + mu, split by the discriminant 27 mu (4 - mu)"""
    _check_finite(mu)
    mu = float(mu)
    roots = tuple(_real_roots(mu))
    if mu < 0:
        case = 1
        if len(roots) != 1 or roots[0] <= 3:
            raise ValidationError(f"mu={mu}: expected a unique real root > 3, got {roots}")
    elif mu == 0:
        case = 2
    elif mu < 4:
        case = 3
        in_23 = [r for r in roots if 2 < r < 3]
        in_22 = [r for r in roots if -2 < r < 2]
        if len(roots) != 3 or len(in_23) != 1 or len(in_22) != 2:
            raise ValidationError(f"mu={mu}: root placement violated, got {roots}")
    elif mu == 4:
        case = 4
    else:
        case = 5
        if len(roots) != 1 or roots[0] >= 0:
            raise ValidationError(f"mu={mu}: expected a unique negative root, got {roots}")
        if abs(mu - 20) > 1e-9 and (abs(roots[0]) < 2) != (mu < 20):
            raise ValidationError(f"mu={mu}: |t'| < 2 must hold exactly when mu < 20, got {roots[0]}")
    return RealRootCase(case=case, roots=roots)


def _check_positive_domain(lambda1: float, lambda2: float, lambda3: float, s: float) -> None:
    for name, value in (('lambda1', lambda1), ('lambda2', lambda2), ('lambda3', lambda3), ('s', s)):
        if complex(value).imag != 0:
            raise DomainError(f"{name}={value} must be real")
    if min(complex(v).real for v in (lambda1, lambda2, lambda3)) < 0 or complex(s).real > 4:
        raise DomainError(f"({lambda1}, {lambda2}, {lambda3}, {s}) is outside [0, inf)^3 x (-inf, 4]")


def positive_bound_is_degenerate(lambda1: float, lambda2: float, lambda3: float, s: float) -> bool:
    """P(2) = s - 4 - 2(lambda1 + lambda2 + lambda3) vanishes, so T_mu = 2 is a double root"""
    _check_positive_domain(lambda1, lambda2, lambda3, s)
    sigma = complex(lambda1).real + complex(lambda2).real + complex(lambda3).real
    return complex(s).real - 4 - 2 * sigma == 0


def positive_sink_bound(lambda1: float, lambda2: float, lambda3: float, s: float) -> float:
    """T_mu: largest positive real root of X^3 - 3X^2 - (lambda1 + lambda2 + lambda3) X + s"""
    _check_positive_domain(lambda1, lambda2, lambda3, s)
    sigma = complex(lambda1).real + complex(lambda2).real + complex(lambda3).real
    s = complex(s).real
    roots = solve_monic_cubic(-3, -sigma, s).roots
    positive = [r.real for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r)) and r.real > 0]
    bound = max(positive)
    if positive_bound_is_degenerate(lambda1, lambda2, lambda3, s):
        logger.warning(f"P(2) = 0 for mu=({lambda1}, {lambda2}, {lambda3}, {s}): T_mu = 2 is degenerate")
    elif bound <= 2:
        raise ValidationError(f"T_mu={bound} should exceed 2")
    return bound


def max_dominant_modulus(r: float) -> float:
    """max |t_mu| over the circle |mu| = r, attained at mu = -r"""
    if r < 0:
        raise DomainError(f"radius must be non-negative, got {r}")
    return abs(dominant_root(-r))
