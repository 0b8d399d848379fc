"""Map geometries: per-vertex angles on a combinatorial map, and the
three-marked-point plane model with its line-incidence quirks.

Angles are exact rational multiples of pi by default, so the euclidean
case of the vertex trichotomy is an exact equality test.  Inexact angles
carry an explicit tolerance and the euclidean verdict is then flagged as
proximity only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from . import maps as _m
from .errors import GeometryError, SPlaneError


@dataclass(frozen=True)
class Angle:
    """Either an exact (num/den)*pi or a float in radians with tolerance."""

    pi_multiple: Optional[Fraction]
    approx: Optional[float] = None
    tol: float = 1e-9

    @staticmethod
    def exact(num: int, den: int = 1) -> "Angle":
        if den <= 0:
            raise GeometryError("denominator must be positive")
        return Angle(Fraction(num, den))

    @staticmethod
    def radians(value: float, tol: float = 1e-9) -> "Angle":
        return Angle(None, float(value), tol)

    @property
    def is_exact(self) -> bool:
        return self.pi_multiple is not None

    def value(self) -> float:
        if self.is_exact:
            return float(self.pi_multiple) * math.pi
        return self.approx

    def __post_init__(self):
        if self.is_exact:
            if self.pi_multiple <= 0:
                raise GeometryError("angle must be positive")
        elif self.approx is None or self.approx <= 0:
            raise GeometryError("angle must be positive")

    def __str__(self):
        if self.is_exact:
            f = self.pi_multiple
            return f"{f.numerator}/{f.denominator} pi"
        return f"{self.approx!r} rad"


class VertexKind(enum.Enum):
    ELLIPTIC = "elliptic"
    EUCLIDEAN = "euclidean"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class VertexClassification:
    kind: VertexKind
    within_tolerance: bool = False  # inexact value within tol of the flat case


class MapGeometry:
    """A combinatorial map with an angle at every vertex.

    Every valency must be at least 3 and every angle must lie strictly
    between 0 and two full turns divided by the valency doubled -- that
    is, 0 < angle < 4*pi/valency.
    """

    __slots__ = ("map", "mu", "_vertices")

    def __init__(self, m: _m.CombMap, mu: Mapping[str, Angle]):
        vs = _m.vertices(m)
        for v in vs:
            val = _m.valency(m, v)
            if val < 3:
                raise GeometryError(
                    f"vertex {v.key} has valency {val} < 3")
            if v.key not in mu:
                raise GeometryError(f"no angle for vertex {v.key}")
            _check_bound(mu[v.key], val, v.key)
        extra = set(mu) - {v.key for v in vs}
        if extra:
            raise GeometryError(f"angle for unknown vertex {sorted(extra)[0]}")
        self.map = m
        self.mu = dict(mu)
        self._vertices = vs

    def vertices(self) -> list[_m.Vertex]:
        return list(self._vertices)


def _check_bound(angle: Angle, valency: int, key: str) -> None:
    if angle.is_exact:
        if not (0 < angle.pi_multiple < Fraction(4, valency)):
            raise GeometryError(
                f"angle at {key} must lie strictly in (0, 4pi/{valency})")
    else:
        if not (0 < angle.approx < 4 * math.pi / valency):
            raise GeometryError(
                f"angle at {key} must lie strictly in (0, 4pi/{valency})")


def new_geometry(m: _m.CombMap, mu: Mapping[str, Angle]) -> MapGeometry:
    return MapGeometry(m, mu)


def classify_vertex(g: MapGeometry, key: str) -> VertexClassification:
    """Trichotomy on valency*angle against one full turn: below is
    elliptic, equal is euclidean, above is hyperbolic."""
    v = next((v for v in g.vertices() if v.key == key), None)
    if v is None:
        raise GeometryError(f"unknown vertex {key}")
    val = _m.valency(g.map, v)
    angle = g.mu[key]
    if angle.is_exact:
        t = val * angle.pi_multiple
        if t < 2:
            return VertexClassification(VertexKind.ELLIPTIC)
        if t == 2:
            return VertexClassification(VertexKind.EUCLIDEAN)
        return VertexClassification(VertexKind.HYPERBOLIC)
    ratio = val * angle.approx / (2 * math.pi)
    if abs(ratio - 1) <= angle.tol:
        return VertexClassification(VertexKind.EUCLIDEAN, True)
    kind = VertexKind.ELLIPTIC if ratio < 1 else VertexKind.HYPERBOLIC
    return VertexClassification(kind)


@dataclass(frozen=True)
class AngleSum:
    """Signed angle total; ``Angle`` itself is strictly positive."""

    pi_multiple: Optional[Fraction]
    approx: Optional[float] = None

    @property
    def is_exact(self) -> bool:
        return self.pi_multiple is not None

    def value(self) -> float:
        if self.is_exact:
            return float(self.pi_multiple) * math.pi
        return self.approx

    def __str__(self):
        if self.is_exact:
            f = self.pi_multiple
            return f"{f.numerator}/{f.denominator} pi"
        return repr(self.approx)


def total_angle_defect(g: MapGeometry) -> AngleSum:
    """Sum over vertices of (full turn minus valency*angle); exact when
    every angle is exact."""
    if all(g.mu[v.key].is_exact for v in g.vertices()):
        total = Fraction(0)
        for v in g.vertices():
            total += 2 - _m.valency(g.map, v) * g.mu[v.key].pi_multiple
        return AngleSum(total)
    total_f = 0.0
    for v in g.vertices():
        total_f += 2 * math.pi - _m.valency(g.map, v) * g.mu[v.key].value()
    return AngleSum(None, total_f)


class BoundedMapGeometry:
    """A geometry with between one and all-but-one faces removed, as long
    as the retained skeleton stays connected.

    Connectivity is read on the skeleton: keep every vertex and edge that
    touches at least one surviving face, and ask that graph to be
    connected.
    """

    __slots__ = ("base", "removed")

    def __init__(self, base: MapGeometry, removed: Sequence[str]):
        fs = _m.faces(base.map)
        keys = [f.key for f in fs]
        if len(set(removed)) != len(removed):
            raise GeometryError("removed faces must be distinct")
        for k in removed:
            if k not in keys:
                raise GeometryError(f"unknown face {k}")
        l = len(removed)
        if not 1 <= l <= len(fs) - 1:
            raise GeometryError(
                f"must remove between 1 and {len(fs) - 1} faces, got {l}")
        retained = [f for f in fs if f.key not in set(removed)]
        kept_edges = {f1 >> 2 for f in retained for f1 in f.flags + f.paired}
        vs = _m.vertices(base.map)
        flag_vertex = {}
        for i, v in enumerate(vs):
            for f in v.flags + v.paired:
                flag_vertex[f] = i
        kept_vertices = sorted({flag_vertex[4 * e] for e in kept_edges}
                               | {flag_vertex[4 * e + 2] for e in kept_edges})
        if not kept_vertices:
            raise GeometryError("nothing retained")
        parent = {i: i for i in kept_vertices}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in kept_edges:
            a, b = flag_vertex[4 * e], flag_vertex[4 * e + 2]
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
        if len({find(i) for i in kept_vertices}) != 1 or (
                len(kept_vertices) != len(vs)):
            raise GeometryError("retained complex is disconnected")
        self.base = base
        self.removed = tuple(removed)

    def retained_faces(self) -> list[_m.Face]:
        return [f for f in _m.faces(self.base.map)
                if f.key not in set(self.removed)]


def with_boundary(g: MapGeometry, face_keys: Sequence[str]
                  ) -> BoundedMapGeometry:
    return BoundedMapGeometry(g, face_keys)


# ---------------------------------------------------------------------------
# the marked plane: lines through exactly one of three fixed points


Point = tuple[Fraction, Fraction]


def point(x, y) -> Point:
    return (Fraction(x), Fraction(y))


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return ((a[0] - o[0]) * (b[1] - o[1])
            - (a[1] - o[1]) * (b[0] - o[0]))


def _collinear(p: Point, q: Point, x: Point) -> bool:
    return _cross(p, q, x) == 0


@dataclass(frozen=True)
class SPlaneConfig:
    """Three non-collinear marked points with exact coordinates.

    A line of the model (an s-line) is a euclidean line through exactly
    one marked point, so ordinary incidence and parallel axioms each hold
    for some point pairs and fail for others.
    """

    a: Point
    b: Point
    c: Point

    def __post_init__(self):
        pts = (self.a, self.b, self.c)
        if len(set(pts)) != 3:
            raise SPlaneError("marked points must be pairwise distinct")
        if _collinear(self.a, self.b, self.c):
            raise SPlaneError("marked points must not be collinear")

    def marked(self) -> tuple[Point, Point, Point]:
        return (self.a, self.b, self.c)

    def marked_on_line(self, p: Point, q: Point) -> int:
        return sum(1 for x in self.marked() if _collinear(p, q, x))


@dataclass(frozen=True)
class SLine:
    """A model line given by two of its points."""

    p: Point
    q: Point

    def __post_init__(self):
        if self.p == self.q:
            raise SPlaneError("line needs two distinct points")

    def contains(self, x: Point) -> bool:
        return _collinear(self.p, self.q, x)


def s_line_through(cfg: SPlaneConfig, p: Point, q: Point) -> int:
    """1 iff the euclidean line through p and q is a model line (meets
    exactly one marked point), else 0."""
    if p == q:
        raise SPlaneError("points must be distinct")
    return 1 if cfg.marked_on_line(p, q) == 1 else 0


def s_parallels_through(cfg: SPlaneConfig, line: SLine, p: Point) -> int:
    """1 iff the unique euclidean parallel to ``line`` through ``p`` is
    itself a model line, else 0."""
    if cfg.marked_on_line(line.p, line.q) != 1:
        raise SPlaneError("given line is not a model line")
    if line.contains(p):
        raise SPlaneError("point must lie off the line")
    d = (line.q[0] - line.p[0], line.q[1] - line.p[1])
    p2 = (p[0] + d[0], p[1] + d[1])
    return 1 if cfg.marked_on_line(p, p2) == 1 else 0
