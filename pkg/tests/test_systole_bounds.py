import math

import pytest
from hypothesis import given, strategies as st

from markoff_systoles.algebra.cubic_roots import dominant_root, largest_real_root
from markoff_systoles.characters.character_variety import n3_extremal_character
from markoff_systoles.core.data_types import (
    BoundQuantity,
    ConeAngle,
    Cusp,
    DZeroBranch,
    GeodesicBoundary,
    GeodesicKind,
    MarkoffTriple,
    NonFuchsianClass,
)
from markoff_systoles.core.exceptions import DegenerateParameterError, DomainError, EllipticTraceError
from markoff_systoles.systoles.systole_bounds import (
    boundary_trace,
    length_to_trace,
    n3_one_sided_bound,
    n3_quasi_fuchsian_bound,
    nonfuchsian_torus_report,
    qf_sphere_bound,
    sphere_systole_bound,
    torus_systole_bound,
    trace_to_length,
    tys_n3,
    tys_sphere,
    tys_torus,
)

SQRT17 = math.sqrt(17)


@pytest.mark.parametrize("trace, kind, expected", [
    (2, GeodesicKind.TWO_SIDED, 0.0),
    (7, GeodesicKind.TWO_SIDED, 3.849695),
    (-7, GeodesicKind.TWO_SIDED, 3.849695),
    (0, GeodesicKind.ONE_SIDED, 0.0),
])
def test_trace_to_length(trace, kind, expected):
    assert trace_to_length(trace, kind) == pytest.approx(expected, abs=1e-6)


def test_one_sided_extremal_length():
    length = trace_to_length(math.sqrt(3 + SQRT17), GeodesicKind.ONE_SIDED)
    assert math.cosh(length) == pytest.approx((5 + SQRT17) / 2)


def test_elliptic_trace_raises():
    with pytest.raises(EllipticTraceError):
        trace_to_length(1.5)


@given(st.floats(0, 30), st.sampled_from(list(GeodesicKind)))
def test_length_to_trace_inverts_trace_to_length(length, kind):
    assert trace_to_length(length_to_trace(length, kind), kind) == pytest.approx(length, abs=1e-7)


def test_negative_length_raises():
    with pytest.raises(DomainError):
        length_to_trace(-1)


def test_tys_torus_cusp():
    assert tys_torus(-2) == pytest.approx(3)


def test_tys_torus_degenerate():
    with pytest.raises(DegenerateParameterError):
        tys_torus(2)


def test_tys_torus_nonfuchsian_parameter():
    # X^3 - 3X^2 + 18 has a real root near -1.92 and a complex pair of modulus near 3.06
    assert tys_torus(16) == pytest.approx(math.sqrt(18 / abs(largest_real_root(18))))


@pytest.mark.parametrize("boundary, expected", [
    (Cusp(), 1.5),
    (ConeAngle(1.2), math.cos(1.2 / 6) + 0.5),
    (GeodesicBoundary(2.0), math.cosh(2.0 / 6) + 0.5),
    (GeodesicBoundary(12.0), math.cosh(12.0 / 6) + 0.5),
])
def test_torus_systole_bound(boundary, expected):
    bound = torus_systole_bound(boundary)
    assert bound.quantity == BoundQuantity.COSH_HALF_SYS
    assert bound.value == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("boundary", [GeodesicBoundary(0.0), ConeAngle(0.0), ConeAngle(7.0)])
def test_invalid_boundary(boundary):
    with pytest.raises(DomainError):
        boundary_trace(boundary)


def test_tys_sphere_quasi_fuchsian():
    assert tys_sphere(2, 2, 2, 2) == pytest.approx(7)


def test_tys_sphere_boundary_case(caplog):
    assert tys_sphere(0, 0, 0, 0) == pytest.approx(2)
    assert "degenerate" in caplog.text


def test_tys_sphere_solves_its_cubic():
    # gt(2, 2, 0, 0) = (4, 0, 0, -4)
    t = tys_sphere(2, 2, 0, 0)
    assert t > 2
    assert abs(t ** 3 - 3 * t ** 2 - 4 * t - 4) <= 1e-10 * t ** 3


def test_tys_sphere_rejects_negative_traces():
    with pytest.raises(DomainError):
        tys_sphere(-1, 2, 2, 2)


def test_sphere_systole_bound_for_cusps():
    bound = sphere_systole_bound([Cusp()] * 4)
    assert bound.quantity == BoundQuantity.LENGTH
    assert bound.value == pytest.approx(2 * math.acosh(3.5))


def test_sphere_systole_bound_grows_with_the_boundary():
    small = sphere_systole_bound([GeodesicBoundary(0.5)] * 4).value
    large = sphere_systole_bound([GeodesicBoundary(3.0)] * 4).value
    assert large > small > 2 * math.acosh(3.5)


def test_sphere_systole_bound_needs_four_boundaries():
    with pytest.raises(DomainError):
        sphere_systole_bound([Cusp()] * 3)


def test_qf_sphere_bound():
    bound = qf_sphere_bound()
    assert bound.quantity == BoundQuantity.LENGTH
    assert bound.value == pytest.approx(3.849695, abs=1e-6)


def test_n3_constants():
    assert tys_n3() == pytest.approx(2.668908, abs=1e-6)
    bound = n3_quasi_fuchsian_bound()
    assert bound.quantity == BoundQuantity.COSH_SYS
    assert bound.value == pytest.approx((5 + SQRT17) / 2)


def test_n3_extremal_character_attains_the_bound():
    bound = n3_one_sided_bound(*n3_extremal_character(), radius=3)
    assert bound.quantity == BoundQuantity.TRACE
    assert bound.value == pytest.approx(tys_n3())


def test_n3_one_sided_bound_d_zero():
    assert isinstance(n3_one_sided_bound(2, 0, 0, 0), DZeroBranch)


def test_nonfuchsian_small_k():
    report = nonfuchsian_torus_report(10)
    assert report.classification == NonFuchsianClass.ELLIPTIC_GUARANTEED
    assert report.trace_bound is None


def test_nonfuchsian_threshold_is_two():
    report = nonfuchsian_torus_report(18)
    assert report.classification == NonFuchsianClass.TRACE_BOUND
    assert report.trace_bound == pytest.approx(2)


def test_nonfuchsian_large_k():
    report = nonfuchsian_torus_report(34)
    length = 2 * math.acosh(17)
    assert report.trace_bound == pytest.approx(2 * math.cosh(length / 6) - 1)


def test_nonfuchsian_descent_from_a_base():
    # (0, 1, z) with z^2 = k + 1 lies on the k = 15 slice and has a region of modulus < 2
    report = nonfuchsian_torus_report(15, base=MarkoffTriple(0, 1, 4))
    assert report.small_region_fired


def test_nonfuchsian_requires_k_above_two():
    with pytest.raises(DomainError):
        nonfuchsian_torus_report(2)


@pytest.mark.parametrize("length", [0.1, 1, 5, 20])
def test_torus_cusp_chain_root(length):
    # a one-holed torus with boundary length l sits over mu = 2 - 2 cosh(l / 2)
    root = dominant_root(2 - 2 * math.cosh(length / 2))
    assert root.imag == pytest.approx(0, abs=1e-12)
    assert root.real / 2 - 1 / 2 == pytest.approx(math.cosh(length / 6), abs=1e-10)
