import math

import numpy as np
import pytest

from markoff_systoles.algebra.cubic_roots import dominant_root, tau
from markoff_systoles.algebra.markoff_map import edge_move, residual_scale, vertex_residual
from markoff_systoles.config.settings import load_config
from markoff_systoles.core.data_types import MarkoffTriple, MuParams
from markoff_systoles.core.exceptions import DegenerateParameterError, OffVarietyError
from markoff_systoles.verifiers.sink_verifier import (
    COUNTEREXAMPLE_MU,
    COUNTEREXAMPLE_TRIPLE,
    HAT_MU,
    SinkVerifier,
    genus2_f,
    hat_transform,
    sink_conditions,
)

SQRT17 = math.sqrt(17)


@pytest.mark.parametrize("m", [0, -5, 2 + 1j, -3 - SQRT17, 30, 50j])
def test_dominant_triple_is_a_sink(m):
    t = dominant_root(m)
    assert sink_conditions(MarkoffTriple(t, t, t), MuParams(0, 0, 0, m))


def test_sink_conditions():
    assert sink_conditions(MarkoffTriple(3, 3, 3), MuParams())
    assert sink_conditions(COUNTEREXAMPLE_TRIPLE, COUNTEREXAMPLE_MU)
    assert not sink_conditions(MarkoffTriple(3, 6, 15), MuParams())


def test_hat_transform():
    hat = hat_transform(MarkoffTriple(7, 7, 7))
    assert hat.as_tuple() == (9, 9, 9)
    assert sum(hat.as_tuple()) ** 2 == 9 ** 3


def test_hat_transform_off_variety():
    with pytest.raises(OffVarietyError):
        hat_transform(MarkoffTriple(3, 3, 3))


def test_genus2_branch_is_large():
    assert genus2_f(40.0, 10.0, 4.0, 2.5, 3.0) > 8


@pytest.mark.parametrize("m", [0, 2 + 1j, -3 - SQRT17])
def test_complex_sink_constant(verifier, m):
    report = verifier.verify_complex_sink_constant(m, n_samples=4_000, seed=1)
    assert report.passed
    assert report.worst_margin >= -1e-6
    assert report.bound == pytest.approx(abs(tau(m)) ** 2)
    assert report.samples > 0


def test_complex_sink_constant_at_zero_has_witness_near_a_third(verifier):
    report = verifier.verify_complex_sink_constant(0, n_samples=4_000, seed=1)
    assert report.bound == pytest.approx(1 / 9)
    assert -1e-6 <= report.worst_margin <= 1e-2
    assert report.details['witness_distance'] < 0.1


@pytest.mark.parametrize("m", [0, 2 + 1j, -3 - SQRT17])
def test_complex_sink_tau_is_checked_apart_from_samples(verifier, m):
    report = verifier.verify_complex_sink_constant(m, n_samples=2_000, seed=3)
    assert report.details['tau_admissible'] == 1
    assert report.details['tau_margin'] == pytest.approx(0, abs=1e-12)
    p = complex(*report.witness['p'])
    q = complex(*report.witness['q'])
    assert report.worst_margin == pytest.approx(abs(p * q) - abs(tau(m)) ** 2, abs=1e-12)


def test_complex_sink_constant_degenerate_parameter(verifier):
    with pytest.raises(DegenerateParameterError):
        verifier.verify_complex_sink_constant(4, n_samples=100)


def test_complex_sink_constant_is_reproducible(verifier):
    first = verifier.verify_complex_sink_constant(2 + 1j, n_samples=3_000, seed=11)
    second = verifier.verify_complex_sink_constant(2 + 1j, n_samples=3_000, seed=11)
    assert first.to_json() == second.to_json()


def test_worker_count_does_not_change_results():
    single = SinkVerifier(load_config({'samples': 2_000, 'chunk_size': 500}, use_environment=False))
    pooled = SinkVerifier(load_config({'samples': 2_000, 'chunk_size': 500, 'workers': 2}, use_environment=False))
    assert single.verify_hat_lemma(seed=3).to_json() == pooled.verify_hat_lemma(seed=3).to_json()


@pytest.mark.parametrize("mu, bound", [(54, 3), (0, 3), (10, 2), (-1, None), (2, None)])
def test_real_sink(verifier, mu, bound):
    report = verifier.verify_real_sink(mu, grid_steps=161)
    assert report.passed
    if bound is not None:
        assert report.bound == pytest.approx(bound, abs=1e-9)


def test_real_sink_degenerate_parameter(verifier):
    with pytest.raises(DegenerateParameterError):
        verifier.verify_real_sink(4)


@pytest.mark.parametrize("mu, t_real", [(0, 3), (54, -3)])
def test_real_sink_anchor_is_reported_apart(verifier, mu, t_real):
    report = verifier.verify_real_sink(mu, grid_steps=161)
    assert report.bound == pytest.approx(abs(t_real))
    assert report.details['anchor_sink'] == 1
    assert report.details['anchor_margin'] == pytest.approx(0, abs=1e-9)
    witness = MarkoffTriple(*(report.witness[name][0] for name in ('x', 'y', 'z')))
    params = MuParams(0, 0, 0, mu)
    assert abs(vertex_residual(witness, params)) <= 1e-9 * residual_scale(witness, params)
    assert witness.min_modulus() == pytest.approx(report.bound - report.worst_margin, abs=1e-12)


def test_real_sink_without_grid_sinks_fails(verifier):
    # x^2 + y^2 + z^2 - xyz = -1 has no real points with |x|, |y| <= 1/2
    report = verifier.verify_real_sink(-1, grid_extent=0.5, grid_steps=11)
    assert not report.passed
    assert report.samples == 0


@pytest.mark.parametrize("mu, bound", [
    (MuParams(8, 8, 8, -28), 7),
    (MuParams(0, 0, 0, 0), 3),
    (MuParams(1, 1, 1, 0), (3 + math.sqrt(21)) / 2),
])
def test_positive_sink(verifier, mu, bound):
    report = verifier.verify_positive_sink(mu, n_samples=4_000, seed=5)
    assert report.passed
    assert report.bound == pytest.approx(bound, abs=1e-9)


def test_positive_sink_witness_at_seven(verifier):
    mu = MuParams(8, 8, 8, -28)
    report = verifier.verify_positive_sink(mu, n_samples=2_000, seed=5)
    assert -1e-8 <= report.worst_margin <= 0.05
    witness = MarkoffTriple(*(complex(*report.witness[name]).real for name in ('x', 'y', 'z')))
    assert abs(vertex_residual(witness, mu)) <= 1e-9 * residual_scale(witness, mu)
    assert witness.min_modulus() == pytest.approx(7 - report.worst_margin, abs=1e-12)


def test_positive_sink_anchor_goes_through_sink_checks(verifier, mocker):
    report = verifier.verify_positive_sink(MuParams(1, 1, 1, 0), n_samples=1_000, seed=5)
    assert report.details['anchor_on_variety'] == 1
    assert report.details['anchor_sink'] == 1
    assert report.details['anchor_residual'] <= 1e-10

    mocker.patch("markoff_systoles.verifiers.sink_verifier.sink_conditions", return_value=False)
    report = verifier.verify_positive_sink(MuParams(1, 1, 1, 0), n_samples=1_000, seed=5)
    assert report.details['anchor_sink'] == 0
    assert not report.passed


def test_hat_lemma(verifier):
    report = verifier.verify_hat_lemma(n_samples=4_000, seed=2)
    assert report.passed
    assert report.bound == 9
    assert report.worst_margin >= -1e-8
    assert report.details['parametrization_mismatches'] == 0
    assert report.details['edge_relation_residual'] <= 1e-10
    assert report.details['original_vertex_residual'] <= 1e-10
    assert report.details['anchor_margin'] == pytest.approx(0, abs=1e-12)


def test_hat_lemma_catches_a_broken_edge_relation(verifier, mocker):
    def shifted_move(t, i, mu):
        moved = edge_move(t, i, mu)
        return moved.replace(i, moved.coordinate(i) + 1)

    mocker.patch("markoff_systoles.verifiers.sink_verifier.edge_move", side_effect=shifted_move)
    report = verifier.verify_hat_lemma(n_samples=1_000, seed=2)
    assert report.details['edge_relation_residual'] > 1e-10
    assert not report.passed


def test_hat_vertex_identity_matches_the_original_equation():
    rng = np.random.default_rng(8)
    n = 10_000
    x = rng.normal(0, 20, n) + 1j * rng.normal(0, 20, n)
    y = rng.normal(0, 20, n) + 1j * rng.normal(0, 20, n)
    z = rng.normal(0, 20, n) + 1j * rng.normal(0, 20, n)
    t = MarkoffTriple(x, y, z)
    hat_total = (x + y + z + 6) ** 2 - (x + 2) * (y + 2) * (z + 2)
    scale = np.maximum.reduce([np.abs(x) ** 2, np.abs(y) ** 2, np.abs(z) ** 2, np.abs(x * y * z)])
    assert np.max(np.abs(hat_total - vertex_residual(t, HAT_MU)) / scale) < 1e-12

    # z solved from the (8, 8, 8, -28) vertex equation lands on the hat relation
    b = x * y - 8
    c = x * x + y * y + 8 * x + 8 * y + 28
    z = (b + np.sqrt(b * b - 4 * c)) / 2
    on_variety = MarkoffTriple(x, y, z)
    scale = np.maximum.reduce([np.abs(x) ** 2, np.abs(y) ** 2, np.abs(z) ** 2, np.abs(x * y * z)])
    assert np.max(np.abs(vertex_residual(on_variety, HAT_MU)) / scale) < 1e-10
    hat_total = (x + y + z + 6) ** 2 - (x + 2) * (y + 2) * (z + 2)
    assert np.max(np.abs(hat_total) / scale) < 1e-10


@pytest.mark.parametrize("a, d", [(2.5, 3.0), (2.1, 2.2)])
def test_genus2_corner(verifier, a, d):
    report = verifier.genus2_corner_check([a], [d], branch_samples=50, seed=4)
    assert report.passed
    assert report.worst_margin > 0


def test_genus2_requires_a_strict_margin(verifier, mocker):
    def flat_f(x, y, z, a, d):
        # f == 0 at every corner, large on the branch
        return np.full(np.shape(x), 100.0) if np.ndim(x) else 0.0

    mocker.patch("markoff_systoles.verifiers.sink_verifier.genus2_f", side_effect=flat_f)
    report = verifier.genus2_corner_check([2.5], [3.0], branch_samples=20, seed=4)
    assert report.worst_margin == 0
    assert not report.passed


def test_counterexample(verifier):
    report = verifier.counterexample_check()
    assert report.passed
    assert report.bound == pytest.approx((3 + math.sqrt(129)) / 2)
    assert report.worst_margin == pytest.approx(10 - (3 + math.sqrt(129)) / 2)
    assert report.details['on_variety'] == 1


def test_counterexample_rejects_an_off_variety_triple(verifier, mocker):
    mocker.patch("markoff_systoles.verifiers.sink_verifier.COUNTEREXAMPLE_TRIPLE", MarkoffTriple(-10, -10, 10.001))
    report = verifier.counterexample_check()
    assert report.details['on_variety'] == 0
    assert not report.passed


def test_run_all(mocker):
    verifier = SinkVerifier(load_config({'samples': 1_000, 'chunk_size': 1_000}, use_environment=False))
    spy = mocker.spy(verifier, 'verify_complex_sink_constant')
    reports = verifier.run_all(seed=1)
    assert spy.call_count == 5
    assert len(reports) == 16
    assert all(r.passed for r in reports)
