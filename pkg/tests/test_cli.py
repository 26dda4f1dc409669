import json

import pytest

from markoff_systoles.cli import run
from markoff_systoles.core.data_models import VerificationReport
from markoff_systoles.core.data_types import Slope
from markoff_systoles.utils.dot_utils import parse_dot_labels


def _run(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_tys_torus_cusp(capsys):
    code, out, _ = _run(capsys, 'tys', 'torus', '-2')
    assert code == 0
    assert out.strip() == '3'


def test_gt(capsys):
    code, out, _ = _run(capsys, 'gt', '2', '2', '2', '2')
    assert code == 0
    assert out.strip() == '(8, 8, 8, -28)'


def test_gt_json(capsys):
    code, out, _ = _run(capsys, 'gt', '2', '2', '2', '2', '--output', 'json')
    assert code == 0
    assert json.loads(out)['mu'] == [[8, 0], [8, 0], [8, 0], [-28, 0]]


@pytest.mark.parametrize("argv, expected", [
    (['root', 'dominant', '54'], '3+3i'),
    (['root', 'real', '20'], '-2'),
    (['root', 'classify', '0'], 'case 2: (3, 0)'),
    (['root', 'tau', '4'], '0.5'),
    (['tys', 'sphere', '2', '2', '2', '2'], '7'),
])
def test_root_and_tys_commands(capsys, argv, expected):
    code, out, _ = _run(capsys, *argv)
    assert code == 0
    assert out.strip() == expected


def test_map_eval(capsys):
    code, out, _ = _run(capsys, 'map', 'eval', '--base', '7,7,7', '--lambdas', '8,8,8', '--slope', '2')
    assert code == 0
    assert out.strip() == '34'


def test_map_reduce_json(capsys):
    code, out, _ = _run(capsys, 'map', 'reduce', '--base', '3,3,3', '--start', 'inf,0,-1', '--output', 'json')
    assert code == 0
    payload = json.loads(out)
    assert payload['outcome'] == 'sink'
    assert payload['vertex'] == '0/1,1/1,inf'
    assert payload['steps'] == 1
    assert payload['path'] == [payload['start'], payload['vertex']]
    assert payload['path'][0] == '-1/1,0/1,inf'


def test_map_reduce_json_path_for_a_small_region(capsys):
    code, out, _ = _run(capsys, 'map', 'reduce', '--base', '1,5,5', '--output', 'json')
    assert code == 0
    payload = json.loads(out)
    assert payload['outcome'] == 'small_region'
    assert payload['path'] == ['0/1,1/1,inf']
    assert len(payload['path']) == payload['steps'] + 1


def test_map_dot_round_trip(capsys):
    code, out, _ = _run(capsys, 'map', 'dot', '--base', '3,3,3', '--radius', '2')
    assert code == 0
    assert out.startswith('digraph G {')
    nodes = parse_dot_labels(out)
    assert len(nodes) == 10
    assert all(values[Slope(1, 0)] == 3 for t, values in nodes.items() if Slope(1, 0) in t)


def test_map_dot_to_file(capsys, tmp_path):
    target = tmp_path / 'tree.dot'
    code, out, _ = _run(capsys, 'map', 'dot', '--radius', '1', '--dot-file', str(target))
    assert code == 0
    assert out == ''
    assert target.read_text().count('->') == 3


def test_verify_sink_complex_is_deterministic(capsys):
    argv = ['verify', 'sink-complex', '--mu', '0', '--samples', '3000', '--seed', '1', '--output', 'json']
    code, first, _ = _run(capsys, *argv)
    _, second, _ = _run(capsys, *argv)
    assert code == 0
    assert first == second
    payload = json.loads(first)
    assert payload['passed'] is True
    assert payload['seed'] == 1
    assert payload['worst_margin'] >= -1e-6
    assert set(payload) == {'theorem', 'samples', 'worst_margin', 'witness', 'passed', 'seed'}


def test_failed_verification_exits_one(capsys, mocker):
    failed = VerificationReport(theorem='hat', samples=10, worst_margin=-1.0, tolerance=1e-8,
                                passed=False, seed=1)
    mocker.patch('markoff_systoles.cli.SinkVerifier.verify_hat_lemma', return_value=failed)
    code, out, _ = _run(capsys, 'verify', 'hat')
    assert code == 1
    assert 'hat' in out


def test_verify_all_exports(capsys, mocker, tmp_path):
    report = VerificationReport(theorem='genus2', samples=5, worst_margin=0.5, tolerance=0.0, passed=True, seed=1)
    run_all = mocker.patch('markoff_systoles.cli.SinkVerifier.run_all', return_value=[report])
    code, _, _ = _run(capsys, 'verify', 'all', '--samples', '10', '--seed', '4', '--export', str(tmp_path))
    assert code == 0
    run_all.assert_called_once_with(10, 4)
    assert (tmp_path / 'reports.csv').exists()
    assert json.loads((tmp_path / 'reports.json').read_text())[0]['theorem'] == 'genus2'


def test_oracle_cross_check(capsys):
    code, out, _ = _run(capsys, 'oracle', 'cross-check', '--trials', '3', '--max-denominator', '5',
                        '--output', 'json')
    assert code == 0
    assert json.loads(out)['theorem'] == 'oracle'


def test_sys_torus_cusp(capsys):
    code, out, _ = _run(capsys, 'sys', 'torus', 'cusp', '--output', 'json')
    assert code == 0
    payload = json.loads(out)
    assert payload['quantity'] == 'cosh_half_sys'
    assert payload['value'] == pytest.approx(1.5)


@pytest.mark.parametrize("argv", [
    ['root', 'dominant', 'abc'],
    ['tys', 'torus', '2'],
    ['map', 'eval', '--base', '1,1,1', '--mu', '0,0,0,0', '--slope', '1/2'],
    ['map', 'eval', '--slope', '1/0/2'],
    ['sys', 'torus', 'length=-1'],
    ['frobnicate'],
    ['verify', 'sink-complex', '--samples', '0'],
])
def test_invalid_input_exits_two(capsys, argv):
    code, _, err = _run(capsys, *argv)
    assert code == 2
    assert err
