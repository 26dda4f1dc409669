"""Farey triangulation, its dual trivalent tree and the slope/word correspondence"""

import logging
from collections import deque
from functools import lru_cache
from math import gcd
from typing import Dict, Iterator, List, Tuple

from ..core.data_types import Slope, Triangle, TreeEdge, Word
from ..core.exceptions import InvalidSlopeError, NotNeighborsError, ValidationError

logger = logging.getLogger(__name__)


def reduce_slope(p: int, q: int) -> Slope:
    """Reduced representative of p/q with non-negative denominator; (1, 0) is infinity"""
    if p == 0 and q == 0:
        raise InvalidSlopeError("(0, 0) is not a slope")
    g = gcd(p, q)
    p, q = p // g, q // g
    if q < 0:
        p, q = -p, -q
    if q == 0:
        p = 1
    return Slope(p, q)


INFINITY = Slope(1, 0)
ZERO = Slope(0, 1)
ONE = Slope(1, 1)
BASE_TRIANGLE = Triangle((INFINITY, ZERO, ONE))

ALPHA = Word(('a',))
BETA = Word(('b',))


def is_farey_neighbor(a: Slope, b: Slope) -> bool:
    return abs(a.numerator * b.denominator - a.denominator * b.numerator) == 1


def mediant(a: Slope, b: Slope) -> Slope:
    """Farey mediant of two neighbors, lying between them"""
    if not is_farey_neighbor(a, b):
        raise NotNeighborsError(f"{a} and {b} are not Farey neighbors")
    if a.is_infinite or b.is_infinite:
        finite = b if a.is_infinite else a
        sign = -1 if finite.numerator < 0 else 1
        return reduce_slope(finite.numerator + sign, finite.denominator)
    return reduce_slope(a.numerator + b.numerator, a.denominator + b.denominator)


def color(r: Slope) -> int:
    """Parity tri-coloring: (odd, even) -> 1, (even, odd) -> 2, (odd, odd) -> 3"""
    parity = (r.numerator % 2, r.denominator % 2)
    return {(1, 0): 1, (0, 1): 2, (1, 1): 3}[parity]


def edge_color(e: TreeEdge) -> int:
    return color(e.opposite[0])


def make_triangle(a: Slope, b: Slope, c: Slope) -> Triangle:
    """Validated Triangle constructor"""
    for x, y in ((a, b), (b, c), (a, c)):
        if not is_farey_neighbor(x, y):
            raise NotNeighborsError(f"{x} and {y} are not Farey neighbors")
    if len({color(a), color(b), color(c)}) != 3:
        raise ValidationError(f"regions {a}, {b}, {c} do not carry three colors")
    return Triangle((a, b, c))


def reflect(x: Slope, y: Slope, z: Slope) -> Slope:
    """The slope W != Z adjacent to both X and Y"""
    candidates = (
        reduce_slope(x.numerator + y.numerator, x.denominator + y.denominator),
        reduce_slope(x.numerator - y.numerator, x.denominator - y.denominator),
    )
    w = [c for c in candidates if c != z]
    if len(w) != 1:
        raise NotNeighborsError(f"({x}, {y}; {z}) is not a tree edge")
    return w[0]


def cross(t: Triangle, z: Slope) -> Tuple[TreeEdge, Triangle]:
    """Cross the edge of t opposite the region z"""
    x, y = t.other_regions(z)
    w = reflect(x, y, z)
    neighbor = Triangle((x, y, w))
    return TreeEdge(flanking=(x, y), opposite=(z, w), endpoints=(t, neighbor)), neighbor


def triangle_neighbors(t: Triangle) -> List[Tuple[TreeEdge, Triangle]]:
    """The three adjacent vertices, ordered by the opposite region of t"""
    return [cross(t, z) for z in t.regions]


def arc_opposite(t: Triangle, s: Slope) -> Slope:
    """Region of t opposite the arc of the projective line that contains s"""
    r0, r1, r2 = t.regions
    key = s.sort_key()
    if r0.sort_key() < key < r1.sort_key():
        return r2
    if r1.sort_key() < key < r2.sort_key():
        return r0
    return r1


def path_to_slope(s: Slope, start: Triangle = BASE_TRIANGLE) -> List[Triangle]:
    """Vertices from start to the first vertex having s as a region"""
    path = [start]
    while s not in path[-1]:
        _, nxt = cross(path[-1], arc_opposite(path[-1], s))
        path.append(nxt)
    return path


def path_between(start: Triangle, target: Triangle) -> List[Triangle]:
    """The unique tree path from start to target, both included"""
    path = [start]
    while path[-1] != target:
        current = path[-1]
        outside = [r for r in target.regions if r not in current]
        _, nxt = cross(current, arc_opposite(current, outside[0]))
        path.append(nxt)
    return path


def vertices_within(radius: int, center: Triangle = BASE_TRIANGLE) -> Dict[Triangle, int]:
    """Breadth-first ball of the given radius, vertex -> distance"""
    distances = {center: 0}
    queue = deque([center])
    while queue:
        t = queue.popleft()
        if distances[t] == radius:
            continue
        for _, neighbor in triangle_neighbors(t):
            if neighbor not in distances:
                distances[neighbor] = distances[t] + 1
                queue.append(neighbor)
    return distances


def edges_within(radius: int, center: Triangle = BASE_TRIANGLE) -> Iterator[TreeEdge]:
    """Each edge joining two vertices of the ball, reported once"""
    ball = vertices_within(radius, center)
    for t, dist in ball.items():
        for edge, neighbor in triangle_neighbors(t):
            if neighbor in ball and ball[neighbor] > dist:
                yield edge


@lru_cache(maxsize=None)
def slope_word(s: Slope) -> Word:
    """Primitive word for the curve of slope s.

    Every vertex carries a generating pair (g, h) whose regions are g, h and gh.
    Crossing the edge opposite gh gives (g, h^-1), opposite h gives (g, gh) and
    opposite g gives (gh, h).
    """
    g_slope, h_slope, gh_slope = INFINITY, ZERO, ONE
    g, h = ALPHA, BETA
    while s not in (g_slope, h_slope, gh_slope):
        t = Triangle((g_slope, h_slope, gh_slope))
        z = arc_opposite(t, s)
        _, nxt = cross(t, z)
        w = [r for r in nxt.regions if r not in t][0]
        if z == gh_slope:
            g, h = g, h.inverse()
            h_slope, gh_slope = h_slope, w
        elif z == h_slope:
            g, h = g, g * h
            h_slope, gh_slope = gh_slope, w
        else:
            g, h = g * h, h
            g_slope, gh_slope = gh_slope, w
    if s == g_slope:
        return g
    if s == h_slope:
        return h
    return g * h


def neighborhood_to_json(t: Triangle) -> Dict:
    """{"regions": [...], "edges": [...]} with slopes rendered as "p/q" or "inf" """
    edges = []
    for edge, neighbor in triangle_neighbors(t):
        edges.append({
            'flanking': [str(r) for r in edge.flanking],
            'opposite': [str(r) for r in edge.opposite],
            'color': edge_color(edge),
            'neighbor': [str(r) for r in neighbor.regions],
        })
    return {'regions': [str(r) for r in t.regions], 'edges': edges}


def slope_from_label(label: str) -> Slope:
    """Inverse of str(Slope): "inf", "p/q" or a bare integer"""
    label = label.strip()
    if label in ('inf', '∞', '1/0'):
        return INFINITY
    try:
        if '/' in label:
            p, q = label.split('/')
            return reduce_slope(int(p), int(q))
        return reduce_slope(int(label), 1)
    except ValueError:
        raise InvalidSlopeError(f"'{label}' is not a slope")
