import logging
import math
from typing import Optional, Sequence, Union

from ..algebra.cubic_roots import (
    dominant_root,
    largest_real_root,
    positive_sink_bound,
)
from ..algebra.markoff_map import MarkoffMap
from ..characters.character_variety import gt_map, n3_to_markoff, torus_mu
from ..core.data_models import RunConfig
from ..core.data_types import (
    BoundaryComponent,
    BoundQuantity,
    ConeAngle,
    Cusp,
    DZeroBranch,
    GeodesicBoundary,
    GeodesicKind,
    MarkoffTriple,
    NonFuchsianClass,
    NonFuchsianReport,
    SmallRegion,
    SystoleBound,
)
from ..core.exceptions import DegenerateParameterError, DomainError, EllipticTraceError

logger = logging.getLogger(__name__)

# min |hat value| over hat-map sinks, attained at (9, 9, 9)
HAT_CONSTANT = 9.0
NON_FUCHSIAN_THRESHOLD = 18.0


def trace_to_length(t: float, kind: GeodesicKind = GeodesicKind.TWO_SIDED) -> float:
    """Translation length of an element with |trace| t"""
    t = abs(t)
    if kind == GeodesicKind.ONE_SIDED:
        return 2 * math.asinh(t / 2)
    if t < 2:
        raise EllipticTraceError(f"|trace| {t} < 2 is elliptic")
    return 2 * math.acosh(t / 2)


def length_to_trace(length: float, kind: GeodesicKind = GeodesicKind.TWO_SIDED) -> float:
    if length < 0:
        raise DomainError(f"length must be non-negative, got {length}")
    if kind == GeodesicKind.ONE_SIDED:
        return 2 * math.sinh(length / 2)
    return 2 * math.cosh(length / 2)


def tys_torus(k: complex) -> float:
    """Maximal trace systole of the one-holed torus slice with commutator trace k: |t_{k+2}|"""
    if k == 2:
        raise DegenerateParameterError("k = 2 is excluded")
    return abs(dominant_root(k + 2))


def boundary_trace(boundary: BoundaryComponent) -> float:
    """Trace of the boundary element: 2cosh(l/2), 2 for a cusp, 2cos(theta/2) for a cone point"""
    if isinstance(boundary, GeodesicBoundary):
        if not boundary.length > 0:
            raise DomainError(f"boundary length must be positive, got {boundary.length}")
        return 2 * math.cosh(boundary.length / 2)
    if isinstance(boundary, Cusp):
        return 2.0
    if isinstance(boundary, ConeAngle):
        if not 0 < boundary.angle < 2 * math.pi:
            raise DomainError(f"cone angle must lie in (0, 2pi), got {boundary.angle}")
        return 2 * math.cos(boundary.angle / 2)
    raise DomainError(f"unknown boundary component {boundary!r}")


def torus_systole_bound(boundary: BoundaryComponent) -> SystoleBound:
    """cosh(sys / 2) <= Tys / 2 on the one-holed torus; the boundary trace enters with a minus sign"""
    k = -boundary_trace(boundary)
    value = tys_torus(k) / 2
    return SystoleBound(BoundQuantity.COSH_HALF_SYS, value, context=f"torus, boundary {boundary}, k={k:.12g}")


def tys_sphere(a: float, b: float, c: float, d: float) -> float:
    """Largest positive root of X^3 - 3X^2 - (ab + bc + cd + ac + bd + ad) X + 4 - a^2 - b^2 - c^2 - d^2 - abcd"""
    if min(a, b, c, d) < 0:
        raise DomainError(f"boundary traces must be non-negative, got {(a, b, c, d)}")
    mu = gt_map(a, b, c, d)
    pairwise = a * b + b * c + c * d + a * c + b * d + a * d
    lambda_sum = mu.lambda1 + mu.lambda2 + mu.lambda3
    if abs(lambda_sum - pairwise) > 1e-12 * max(1.0, abs(pairwise)):
        raise DomainError(f"GT parameters {mu.as_tuple()} disagree with the pairwise products {pairwise}")
    return positive_sink_bound(*mu.as_tuple())


def sphere_systole_bound(boundaries: Sequence[BoundaryComponent]) -> SystoleBound:
    """sys <= 2 arccosh(T / 2) on a hyperbolic four-holed sphere"""
    if len(boundaries) != 4:
        raise DomainError(f"a four-holed sphere has four boundary components, got {len(boundaries)}")
    traces = [boundary_trace(b) for b in boundaries]
    if min(traces) < 0:
        raise DomainError(f"cone angles above pi give negative boundary traces {traces}")
    value = tys_sphere(*traces)
    return SystoleBound(BoundQuantity.LENGTH, trace_to_length(value), context=f"sphere, T={value:.12g}")


def qf_sphere_bound() -> SystoleBound:
    """sys <= 2 arccosh(7/2) for quasi-Fuchsian four-punctured spheres, from |2 + 2cosh(L/2)| <= 9"""
    value = 2 * math.acosh((HAT_CONSTANT - 2) / 2)
    return SystoleBound(BoundQuantity.LENGTH, value, context="quasi-Fuchsian four-punctured sphere")


def tys_n3() -> float:
    return math.sqrt(3 + math.sqrt(17))


def n3_quasi_fuchsian_bound() -> SystoleBound:
    """cosh(sys) <= 1 + Tys^2 / 2 = (5 + sqrt 17) / 2 through a one-sided curve"""
    value = math.cosh(trace_to_length(tys_n3(), GeodesicKind.ONE_SIDED))
    return SystoleBound(BoundQuantity.COSH_SYS, value, context="quasi-Fuchsian N_3, one-sided curve")


def n3_one_sided_bound(a: complex, b: complex, c: complex, d: complex, radius: int = 6,
                       config: Optional[RunConfig] = None) -> Union[SystoleBound, DZeroBranch]:
    """Smallest one-sided trace found near the base, from phi = tr * d / 2"""
    reduction = n3_to_markoff(a, b, c, d)
    if isinstance(reduction, DZeroBranch):
        logger.info(f"d = 0: branch a^2 + b^2 + c^2 = 4 {'holds' if reduction.holds else 'fails'}")
        return reduction
    triple, mu = reduction
    phi = MarkoffMap(mu, triple, config=config)
    slope, value = phi.min_region_search(radius)
    trace = abs(2 * value / d)
    return SystoleBound(BoundQuantity.TRACE, float(trace), context=f"N_3 one-sided curve of slope {slope}")


def nonfuchsian_torus_report(k: float, base: Optional[MarkoffTriple] = None,
                             config: Optional[RunConfig] = None) -> NonFuchsianReport:
    """Non-Fuchsian tori with real k > 2: an elliptic simple curve for k < 18, otherwise
    a curve with |trace| <= 2cosh(l/6) - 1, l = 2 arccosh(k/2)"""
    if not k > 2:
        raise DomainError(f"k must exceed 2, got {k}")

    small_region_fired, outcome = None, None
    if base is not None:
        phi = MarkoffMap(torus_mu(k), base, config=config)
        outcome = phi.trace_reduce()
        small_region_fired = isinstance(outcome, SmallRegion)

    if k < NON_FUCHSIAN_THRESHOLD:
        return NonFuchsianReport(k=k, classification=NonFuchsianClass.ELLIPTIC_GUARANTEED,
                                 small_region_fired=small_region_fired, outcome=outcome)

    length = 2 * math.acosh(k / 2)
    bound = 2 * math.cosh(length / 6) - 1
    t_real = largest_real_root(k + 2)
    if abs(abs(t_real) - bound) > 1e-9 * max(1.0, bound):
        logger.warning(f"k={k}: |t'| = {abs(t_real)} differs from 2cosh(l/6) - 1 = {bound}")
    return NonFuchsianReport(k=k, classification=NonFuchsianClass.TRACE_BOUND, trace_bound=bound,
                             small_region_fired=small_region_fired, outcome=outcome)
