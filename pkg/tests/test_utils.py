import json
import os

import pandas as pd
import pytest

from markoff_systoles.core.data_models import VerificationReport
from markoff_systoles.core.data_types import ArrowDirection, Slope, Triangle
from markoff_systoles.core.exceptions import InvalidInputError, ValidationError
from markoff_systoles.farey.farey_tree import BASE_TRIANGLE, edges_within, vertices_within
from markoff_systoles.utils.dot_utils import parse_dot_edges, parse_dot_labels, tree_to_dot
from markoff_systoles.utils.export_utils import export_reports, export_targets, reports_to_frame, write_text
from markoff_systoles.utils.literals import (
    format_number,
    format_tuple,
    parse_complex,
    parse_complex_list,
    parse_slope,
    parse_triangle,
)


@pytest.mark.parametrize("text, expected", [
    ('3', 3),
    ('-2.5', -2.5),
    ('2+i', 2 + 1j),
    ('2-0.5i', 2 - 0.5j),
    ('-i', -1j),
    ('1e-3+2e2i', 0.001 + 200j),
    (' −28 ', -28),
])
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


@pytest.mark.parametrize("text", ['', 'abc', '2+', 'nan', 'inf'])
def test_parse_complex_rejects(text):
    with pytest.raises(InvalidInputError):
        parse_complex(text)


def test_parse_complex_list_length():
    assert parse_complex_list('8,8,8,-28', 4) == [8, 8, 8, -28]
    with pytest.raises(InvalidInputError):
        parse_complex_list('1,2', 3)


@pytest.mark.parametrize("value, expected", [(3, '3'), (2 - 1j, '2-1i'), (0.5j, '0.5i'), (-28.0, '-28')])
def test_format_number(value, expected):
    assert format_number(value) == expected


def test_format_tuple():
    assert format_tuple((8, 8, 8, -28)) == '(8, 8, 8, -28)'


def test_parse_slope_and_triangle():
    assert parse_slope('-2/4') == Slope(-1, 2)
    assert parse_triangle('1,inf,0') == BASE_TRIANGLE
    with pytest.raises(InvalidInputError):
        parse_slope('x')
    with pytest.raises(InvalidInputError):
        parse_triangle('0,1')
    with pytest.raises(InvalidInputError):
        parse_triangle('0,1/3,1')


def test_export_targets(tmp_path):
    paths = export_targets(str(tmp_path), ['reports.csv', 'reports.json', 'tree.dot'])
    assert paths == [str(tmp_path / name) for name in ('reports.csv', 'reports.json', 'tree.dot')]


@pytest.mark.parametrize("filenames", [['reports.txt'], ['reports']])
def test_export_targets_rejects_unknown_file_types(tmp_path, filenames):
    with pytest.raises(ValidationError):
        export_targets(str(tmp_path), filenames)


def test_export_targets_rejects_missing_directory(tmp_path):
    with pytest.raises(ValidationError, match='does not exist'):
        export_targets(str(tmp_path / 'missing'), ['reports.csv'])


def test_export_targets_rejects_a_folder_in_the_way(tmp_path):
    (tmp_path / 'reports.json').mkdir()
    with pytest.raises(ValidationError, match='cannot be overwritten'):
        export_targets(str(tmp_path), ['reports.csv', 'reports.json'])


def _reports():
    return [
        VerificationReport(theorem='sink-complex', samples=10, worst_margin=0.01, witness={'p': [0.3, 0.1]},
                           passed=True, seed=1, bound=1 / 9, details={'tau_re': 1 / 3}),
        VerificationReport(theorem='genus2', samples=4, worst_margin=2.0, tolerance=0.0, passed=True, seed=1),
    ]


def test_reports_to_frame():
    frame = reports_to_frame(_reports())
    assert list(frame['theorem']) == ['sink-complex', 'genus2']
    assert frame.loc[0, 'witness_p_re'] == 0.3
    assert frame.loc[0, 'detail_tau_re'] == pytest.approx(1 / 3)
    assert pd.isna(frame.loc[1, 'witness_p_re'])


def test_reports_to_frame_empty():
    assert reports_to_frame([]).empty


def test_export_reports(tmp_path):
    paths = export_reports(_reports(), str(tmp_path / 'out'))
    assert [os.path.basename(p) for p in paths] == ['reports.csv', 'reports.json']
    assert len(pd.read_csv(paths[0])) == 2
    records = json.loads(open(paths[1]).read())
    assert records[1]['theorem'] == 'genus2'


def test_write_text_refuses_missing_directory(tmp_path):
    with pytest.raises(ValidationError):
        write_text('digraph G {}\n', str(tmp_path / 'missing' / 'tree.dot'))


def test_dot_labels_round_trip(sphere_map):
    text = tree_to_dot(sphere_map, 3)
    nodes = parse_dot_labels(text)
    assert set(nodes) == set(vertices_within(3))
    for values in nodes.values():
        for slope, value in values.items():
            assert value == sphere_map.region_value(slope)


def test_dot_edges_follow_arrows(classic_map):
    edges = parse_dot_edges(tree_to_dot(classic_map, 2))
    assert len(edges) == len(list(edges_within(2)))
    for edge in edges_within(2):
        near, far = edge.endpoints
        expected = (far, near) if classic_map.orient_edge(edge) == ArrowDirection.TOWARDS_Z else (near, far)
        assert expected in edges


def test_dot_emits_two_edges_for_ties():
    from markoff_systoles.algebra.markoff_map import MarkoffMap
    from markoff_systoles.core.data_types import MarkoffTriple, MuParams

    phi = MarkoffMap(MuParams(3, 0, 0, 9), MarkoffTriple(3, 3, 3))
    edges = parse_dot_edges(tree_to_dot(phi, 1))
    neighbor = Triangle((Slope(0, 1), Slope(1, 1), Slope(1, 2)))
    assert (BASE_TRIANGLE, neighbor) in edges
    assert (neighbor, BASE_TRIANGLE) in edges
    assert len(edges) == 4
