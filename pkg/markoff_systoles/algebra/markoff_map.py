import logging
import threading
from contextlib import nullcontext
from typing import Dict, List, Optional, Tuple

import mpmath

from ..config.settings import DEFAULT_CONFIG, load_config
from ..core.data_models import MapSnapshot, RunConfig
from ..core.data_types import (
    ArrowDirection,
    DepthExceeded,
    EdgeOrientation,
    MarkoffTriple,
    MuParams,
    ReductionOutcome,
    SinkFound,
    Slope,
    SmallRegion,
    TreeEdge,
    Triangle,
    VertexClass,
    VertexClassification,
)
from ..core.exceptions import OffVarietyError, PrecisionLossError
from ..farey.farey_tree import (
    BASE_TRIANGLE,
    INFINITY,
    ONE,
    ZERO,
    color,
    cross,
    path_between,
    path_to_slope,
    slope_from_label,
    vertices_within,
)

logger = logging.getLogger(__name__)


def vertex_residual(t: MarkoffTriple, mu: MuParams) -> complex:
    """x1^2 + x2^2 + x3^2 - x1 x2 x3 + l1 x1 + l2 x2 + l3 x3 - s"""
    x1, x2, x3 = t.as_tuple()
    return (x1 * x1 + x2 * x2 + x3 * x3 - x1 * x2 * x3
            + mu.lambda1 * x1 + mu.lambda2 * x2 + mu.lambda3 * x3 - mu.s)


def residual_scale(t: MarkoffTriple, mu: MuParams) -> float:
    """Size of the largest term of the vertex equation, used for relative tolerances"""
    x1, x2, x3 = t.as_tuple()
    terms = [abs(x1) ** 2, abs(x2) ** 2, abs(x3) ** 2, abs(x1 * x2 * x3), abs(mu.s)]
    terms += [abs(lam * x) for lam, x in zip(mu.lambdas, t.as_tuple())]
    return float(max(1.0, *terms))


def edge_move(t: MarkoffTriple, i: int, mu: MuParams) -> MarkoffTriple:
    """Replace x_i by x_j x_k - x_i - lambda_i"""
    j, k = [c for c in (1, 2, 3) if c != i]
    value = t.coordinate(j) * t.coordinate(k) - t.coordinate(i) - mu.lam(i)
    return t.replace(i, value)


def is_sink_triple(t: MarkoffTriple, mu: MuParams) -> bool:
    """|x_i| <= |x_j x_k - x_i - lambda_i| for the three colors"""
    return all(abs(t.coordinate(i)) <= abs(edge_move(t, i, mu).coordinate(i)) for i in (1, 2, 3))


class MarkoffMap:
    """A mu-Markoff map given by its triple at the base vertex (inf, 0, 1).

    Region values are expanded lazily along tree paths and kept in an
    insert-only table guarded by a lock, so a map may be shared by threads.
    """

    def __init__(self, mu: MuParams, base: MarkoffTriple, config: Optional[RunConfig] = None,
                 check_variety: bool = True):
        self.config = config or load_config(use_environment=False)
        self.tolerances = {**DEFAULT_CONFIG['tolerances'], **self.config.tolerances}
        self.high_precision = self.config.precision == 'high'
        self.dps = self.config.high_precision_dps

        with self._precision():
            if self.high_precision:
                mu = MuParams(*(mpmath.mpc(v) for v in mu.as_tuple()))
                base = MarkoffTriple(*(mpmath.mpc(v) for v in base.as_tuple()))
            self.mu = mu
            self.base = base
            residual = vertex_residual(base, mu)
            self.base_residual = residual

        if check_variety and abs(residual) > self.tolerances['vertex_relative'] * residual_scale(base, mu):
            raise OffVarietyError(f"base {base.as_tuple()} is not a {mu.as_tuple()}-Markoff triple "
                                  f"(residual {residual})")

        self._values: Dict[Slope, complex] = {INFINITY: base.x1, ZERO: base.x2, ONE: base.x3}
        self._lock = threading.Lock()

    @classmethod
    def from_base(cls, base: MarkoffTriple, lambdas: Tuple[complex, complex, complex] = (0, 0, 0),
                  config: Optional[RunConfig] = None) -> "MarkoffMap":
        """The map through base whose s is chosen so that base lies on the variety"""
        partial = vertex_residual(base, MuParams(*lambdas, 0))
        return cls(MuParams(*lambdas, partial), base, config=config)

    def _precision(self):
        if getattr(self, 'high_precision', False):
            return mpmath.workdps(self.dps)
        return nullcontext()

    def _store(self, slope: Slope, value: complex) -> None:
        if abs(value) > self.tolerances['value_limit']:
            raise PrecisionLossError(f"|phi({slope})| = {abs(value):.3e} exceeds the value limit")
        with self._lock:
            self._values.setdefault(slope, value)

    def _value_across(self, t: Triangle, z: Slope) -> Tuple[TreeEdge, Triangle, complex]:
        """Value of the region W across the edge of t opposite z; t must be expanded"""
        edge, neighbor = cross(t, z)
        w = edge.opposite[1]
        if w not in self._values:
            x, y = edge.flanking
            with self._precision():
                value = self._values[x] * self._values[y] - self._values[z] - self.mu.lam(color(z))
            self._store(w, value)
        return edge, neighbor, self._values[w]

    def _expand_to(self, v: Triangle) -> None:
        if all(r in self._values for r in v.regions):
            return
        path = path_between(BASE_TRIANGLE, v)
        for current, nxt in zip(path, path[1:]):
            z = [r for r in current.regions if r not in nxt][0]
            self._value_across(current, z)

    def triple_at(self, v: Triangle) -> MarkoffTriple:
        """Color-indexed triple of region values at the vertex v"""
        self._expand_to(v)
        values = {color(r): self._values[r] for r in v.regions}
        return MarkoffTriple(values[1], values[2], values[3])

    def region_value(self, s: Slope) -> complex:
        if s not in self._values:
            self._expand_to(path_to_slope(s)[-1])
        return self._values[s]

    def cached_regions(self) -> Dict[Slope, complex]:
        with self._lock:
            return dict(self._values)

    def _is_tie(self, u: complex, v: complex) -> bool:
        scale = max(abs(u), abs(v))
        return abs(abs(u) - abs(v)) <= self.tolerances['tie_relative'] * scale

    def orient_edge(self, e: TreeEdge) -> ArrowDirection:
        """The arrow points to the endpoint holding the opposite region of smaller modulus"""
        z, w = e.opposite
        self._expand_to(e.endpoints[0])
        _, _, value_w = self._value_across(e.endpoints[0], z)
        value_z = self._values[z]
        if self._is_tie(value_z, value_w):
            return ArrowDirection.BOTH_WAYS
        return ArrowDirection.TOWARDS_Z if abs(value_z) < abs(value_w) else ArrowDirection.TOWARDS_W

    def classify_vertex(self, v: Triangle) -> VertexClassification:
        """Sink, merge, fork or source by the number of inward arrows; ties count as inward"""
        orientations = []
        for z in v.regions:
            edge, _ = cross(v, z)
            arrow = self.orient_edge(edge)
            orientation = {
                ArrowDirection.TOWARDS_Z: EdgeOrientation.TOWARD,
                ArrowDirection.TOWARDS_W: EdgeOrientation.AWAY,
                ArrowDirection.BOTH_WAYS: EdgeOrientation.BOTH,
            }[arrow]
            orientations.append((edge, orientation))
        inward = sum(1 for _, o in orientations if o != EdgeOrientation.AWAY)
        vertex_class = {3: VertexClass.SINK, 2: VertexClass.MERGE, 1: VertexClass.FORK, 0: VertexClass.SOURCE}[inward]
        return VertexClassification(vertex=v, vertex_class=vertex_class, orientations=tuple(orientations))

    def is_on_variety(self, v: Triangle) -> bool:
        triple = self.triple_at(v)
        with self._precision():
            residual = vertex_residual(triple, self.mu)
        return abs(residual) <= self.tolerances['vertex_relative'] * residual_scale(triple, self.mu)

    def trace_reduce(self, start: Triangle = BASE_TRIANGLE, depth_cap: Optional[int] = None) -> ReductionOutcome:
        """Greedy descent along outgoing arrows.

        Stops at the first vertex that carries a region of modulus < 2, at a
        vertex with no strictly outgoing arrow, or after depth_cap moves.
        """
        depth_cap = depth_cap or self.config.depth_cap
        path: List[Triangle] = [start]
        current = start
        while True:
            triple = self.triple_at(current)
            small = [r for r in current.regions if abs(self._values[r]) < 2]
            if small:
                slope = min(small, key=lambda r: (abs(self._values[r]), r.sort_key()))
                logger.debug(f"Region {slope} with |phi| < 2 reached after {len(path) - 1} steps")
                return SmallRegion(slope=slope, value=self._values[slope], path=tuple(path))

            moves = []
            for z in current.regions:
                _, neighbor, value_w = self._value_across(current, z)
                value_z = self._values[z]
                if abs(value_w) < abs(value_z) and not self._is_tie(value_z, value_w):
                    w = [r for r in neighbor.regions if r not in current][0]
                    moves.append((abs(value_w), w.sort_key(), neighbor))
            if not moves:
                logger.debug(f"Sink {current} reached after {len(path) - 1} steps")
                return SinkFound(vertex=current, triple=triple, path=tuple(path))

            if len(path) > depth_cap:
                logger.warning(f"Descent from {start} stopped at depth cap {depth_cap}")
                return DepthExceeded(path=tuple(path))

            _, _, current = min(moves, key=lambda m: (m[0], m[1]))
            path.append(current)
            logger.debug(f"Descent step {len(path) - 1}: {current}")

    def min_region_search(self, radius: int) -> Tuple[Slope, complex]:
        """Region of minimal modulus among the regions of vertices within radius of the base"""
        best = None
        for v in vertices_within(radius):
            self._expand_to(v)
            for r in v.regions:
                key = (abs(self._values[r]), r.sort_key())
                if best is None or key < best[0]:
                    best = (key, r)
        slope = best[1]
        return slope, self._values[slope]

    def snapshot(self) -> MapSnapshot:
        def pair(v) -> List[float]:
            z = complex(v)
            return [z.real, z.imag]

        return MapSnapshot(
            mu=[pair(v) for v in self.mu.as_tuple()],
            base=[pair(v) for v in self.base.as_tuple()],
            regions={str(s): pair(v) for s, v in sorted(self.cached_regions().items(), key=lambda kv: kv[0].sort_key())},
        )

    @classmethod
    def from_snapshot(cls, snapshot: MapSnapshot, config: Optional[RunConfig] = None) -> "MarkoffMap":
        mu = MuParams(*(complex(re, im) for re, im in snapshot.mu))
        base = MarkoffTriple(*(complex(re, im) for re, im in snapshot.base))
        phi = cls(mu, base, config=config)
        for label, (re, im) in snapshot.regions.items():
            value = mpmath.mpc(re, im) if phi.high_precision else complex(re, im)
            phi._values.setdefault(slope_from_label(label), value)
        return phi

