import logging
import re
from typing import Dict, List, Tuple

from ..algebra.markoff_map import MarkoffMap
from ..core.data_types import ArrowDirection, Slope, Triangle
from ..farey.farey_tree import BASE_TRIANGLE, edge_color, edges_within, vertices_within
from .literals import format_number, parse_complex, parse_slope, parse_triangle

logger = logging.getLogger(__name__)

_NODE = re.compile(r'^\s*"(?P<id>[^"]+)"\s*\[\s*label\s*=\s*"(?P<label>[^"]*)"\s*\];\s*$')
_EDGE = re.compile(r'^\s*"(?P<tail>[^"]+)"\s*->\s*"(?P<head>[^"]+)"')


def _node_label(phi: MarkoffMap, v: Triangle) -> str:
    return "; ".join(f"{r}={format_number(phi.region_value(r), 17)}" for r in v.regions)


def tree_to_dot(phi: MarkoffMap, radius: int, center: Triangle = BASE_TRIANGLE) -> str:
    """digraph of the ball of the given radius; every arrow is an edge, ties give two edges"""
    lines = ["digraph G {"]
    for v in vertices_within(radius, center):
        phi.triple_at(v)
        lines.append(f'   "{v}" [ label = "{_node_label(phi, v)}" ];')
    for edge in edges_within(radius, center):
        near, far = edge.endpoints
        arrow = phi.orient_edge(edge)
        pairs = {
            ArrowDirection.TOWARDS_Z: [(far, near)],
            ArrowDirection.TOWARDS_W: [(near, far)],
            ArrowDirection.BOTH_WAYS: [(near, far), (far, near)],
        }[arrow]
        for tail, head in pairs:
            lines.append(f'   "{tail}" -> "{head}" [ label = "{edge_color(edge)}" ];')
    lines.append("}")
    logger.debug(f"DOT output with {len(lines) - 2} statements")
    return "\n".join(lines) + "\n"


def parse_dot_labels(text: str) -> Dict[Triangle, Dict[Slope, complex]]:
    """Region values of every node of a graph written by tree_to_dot"""
    nodes = {}
    for line in text.splitlines():
        match = _NODE.match(line)
        if not match:
            continue
        values = {}
        for item in match.group('label').split(';'):
            slope, value = item.split('=')
            values[parse_slope(slope)] = parse_complex(value)
        nodes[parse_triangle(match.group('id'))] = values
    return nodes


def parse_dot_edges(text: str) -> List[Tuple[Triangle, Triangle]]:
    edges = []
    for line in text.splitlines():
        match = _EDGE.match(line)
        if match:
            edges.append((parse_triangle(match.group('tail')), parse_triangle(match.group('head'))))
    return edges
