"""Convex planar bodies: polygons, graph-form bodies, lattices, affine maps.

Conventions (fixed package-wide):
  * polygon vertices are stored counterclockwise, no repeated closing vertex;
  * "symmetric" always means centrally symmetric (x in Omega iff 2c - x in Omega);
  * the unit square Q is [-1/2, 1/2]^2;
  * standard position: the body contains Q and lies in the slab |x| <= 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Union

import numpy as np
from scipy import integrate

from . import heights
from .errors import (
    DegenerateError,
    EdgeThroughOriginError,
    NotConvexError,
    NotStandardPositionError,
    NotSymmetricError,
)
from .heights import HeightFn


class Point2(NamedTuple):
    x: float
    y: float


E1 = Point2(1.0, 0.0)
E2 = Point2(0.0, 1.0)


def _as_xy(p) -> np.ndarray:
    a = np.asarray(p, dtype=float).reshape(2)
    return a


def cross2(u, v) -> float:
    """Scalar cross product u_x v_y - u_y v_x."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return float(u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0])


def shoelace_area(vertices: np.ndarray) -> float:
    """Signed area of a closed vertex chain (positive for counterclockwise)."""
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


# ---------------------------------------------------------------------------
# polygon type and validation


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Validated convex polygon; construct through validate_polygon()."""

    vertices: np.ndarray  # (m, 2), counterclockwise
    area: float

    @property
    def m(self) -> int:
        return len(self.vertices)

    def edge_vectors(self) -> np.ndarray:
        v = self.vertices
        return np.roll(v, -1, axis=0) - v

    def edge_midpoints(self) -> np.ndarray:
        v = self.vertices
        return 0.5 * (v + np.roll(v, -1, axis=0))

    def edge_normals(self) -> np.ndarray:
        """Outward unit normals, one per edge."""
        d = self.edge_vectors()
        n = np.stack([d[:, 1], -d[:, 0]], axis=1)
        return n / np.linalg.norm(n, axis=1, keepdims=True)

    def perimeter(self) -> float:
        return float(np.sum(np.linalg.norm(self.edge_vectors(), axis=1)))

    def scale(self) -> float:
        return float(np.max(np.abs(self.vertices))) or 1.0


def validate_polygon(vertices) -> ConvexPolygon:
    """Check convexity and return the polygon oriented counterclockwise.

    Raises DegenerateError for collinear/duplicate consecutive vertices or
    zero area, NotConvexError for a right turn or a self-winding chain.
    Reversing the input yields the identical vertex array (orientation is
    normalized, the starting vertex is preserved).
    """
    v = np.array(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2:
        raise DegenerateError("vertices must be an (m, 2) array")
    if len(v) < 3:
        raise DegenerateError("polygon needs at least 3 vertices")
    if not np.all(np.isfinite(v)):
        raise DegenerateError("vertices must be finite")

    scale = float(np.max(np.abs(v)))
    if scale == 0.0:
        raise DegenerateError("all vertices at the origin")
    len_tol = 1e-12 * scale
    cross_tol = 1e-12 * scale * scale

    signed = shoelace_area(v)
    if abs(signed) <= cross_tol:
        raise DegenerateError("zero area")
    if signed < 0.0:
        v = v[::-1].copy()
        signed = -signed

    d = np.roll(v, -1, axis=0) - v
    lengths = np.linalg.norm(d, axis=1)
    if np.any(lengths <= len_tol):
        raise DegenerateError("duplicate consecutive vertices")

    d_next = np.roll(d, -1, axis=0)
    turns = d[:, 0] * d_next[:, 1] - d[:, 1] * d_next[:, 0]
    if np.any(turns < -cross_tol):
        raise NotConvexError("right turn in counterclockwise chain")
    if np.any(np.abs(turns) <= cross_tol):
        raise DegenerateError("collinear consecutive vertices")

    # all-left-turn chains can still wind more than once; total turning must be 2*pi
    dots = np.sum(d * d_next, axis=1)
    turning = float(np.sum(np.arctan2(turns, dots)))
    if abs(turning - 2.0 * math.pi) > 1e-6:
        raise NotConvexError("vertex chain winds more than once")

    v.setflags(write=False)
    return ConvexPolygon(vertices=v, area=signed)


def unit_square() -> ConvexPolygon:
    return validate_polygon([(0.5, -0.5), (0.5, 0.5), (-0.5, 0.5), (-0.5, -0.5)])


def regular_polygon(m: int, circumradius: float = 1.0, phase: float = 0.0) -> ConvexPolygon:
    ang = phase + 2.0 * np.pi * np.arange(m) / m
    return validate_polygon(np.stack([circumradius * np.cos(ang), circumradius * np.sin(ang)], axis=1))


# ---------------------------------------------------------------------------
# graph-form bodies


@dataclass(frozen=True, eq=False)
class GraphBody:
    """{ (x, y) : a <= x <= b, -g(x) <= y <= f(x) } with f, g concave, >= 0."""

    a: float
    b: float
    f: HeightFn
    g: HeightFn

    def __post_init__(self):
        if not (self.a < self.b):
            raise DegenerateError("graph body needs a < b")
        for name, h in (("f", self.f), ("g", self.g)):
            if abs(h.a - self.a) > 1e-12 or abs(h.b - self.b) > 1e-12:
                raise DegenerateError(f"{name} domain does not match [a, b]")
        vmax = max(self.f.max_value(), self.g.max_value(), self.b - self.a)
        tol = 1e-9 * vmax
        xs = np.linspace(self.a, self.b, 257)
        for name, h in (("f", self.f), ("g", self.g)):
            ys = h(xs)
            if np.min(ys) < -tol:
                raise DegenerateError(f"{name} is negative on [a, b]")
            # concavity at sample triples: midpoint above chord
            if np.max(ys[:-2] + ys[2:] - 2.0 * ys[1:-1]) > tol:
                raise NotConvexError(f"{name} is not concave")

    @cached_property
    def area(self) -> float:
        val, _ = _quad_height(lambda x: self.f(x) + self.g(x), self.a, self.b,
                              self.f.breakpoints() + self.g.breakpoints())
        return val

    def height(self, x):
        return self.f(x) + self.g(x)

    def scale(self) -> float:
        return max(abs(self.a), abs(self.b), self.f.max_value(), self.g.max_value()) or 1.0


ConvexBody = Union[ConvexPolygon, GraphBody]


def _quad_height(fn, a, b, breakpoints, epsabs=1e-13):
    pts = sorted(p for p in breakpoints if a < p < b)
    val, err = integrate.quad(fn, a, b, points=pts or None, limit=200,
                              epsabs=epsabs, epsrel=1e-13)
    return float(val), float(err)


def disc(radius: float = 0.5) -> GraphBody:
    h = heights.semicircle(radius)
    return GraphBody(-radius, radius, h, h)


# ---------------------------------------------------------------------------
# measures


class Measures(NamedTuple):
    area: float
    perimeter: float
    diameter: float


def area(body: ConvexBody) -> float:
    """Cached area: exact shoelace for polygons, adaptive quadrature otherwise."""
    return body.area


def centroid(body: ConvexBody) -> Point2:
    if isinstance(body, ConvexPolygon):
        v = body.vertices
        w = np.roll(v, -1, axis=0)
        cr = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
        cx = float(np.sum((v[:, 0] + w[:, 0]) * cr)) / (6.0 * body.area)
        cy = float(np.sum((v[:, 1] + w[:, 1]) * cr)) / (6.0 * body.area)
        return Point2(cx, cy)
    a = body.area
    if a <= 0.0:
        return Point2(0.5 * (body.a + body.b), 0.0)
    brk = body.f.breakpoints() + body.g.breakpoints()
    mx, _ = _quad_height(lambda x: x * (body.f(x) + body.g(x)), body.a, body.b, brk)
    my, _ = _quad_height(lambda x: 0.5 * (body.f(x) ** 2 - body.g(x) ** 2), body.a, body.b, brk)
    return Point2(mx / a, my / a)


def graph_boundary_points(body: GraphBody, n: int = 1024) -> np.ndarray:
    """Boundary sample points, cosine-clustered so curved arcs are resolved
    near the endpoints; includes the vertical end segments when present."""
    t = 0.5 * (1.0 - np.cos(np.linspace(0.0, np.pi, n)))
    xs = body.a + (body.b - body.a) * t
    top = np.stack([xs, body.f(xs)], axis=1)
    bot = np.stack([xs, -body.g(xs)], axis=1)
    pieces = [top, bot]
    for xe in (body.a, body.b):
        fe, ge = float(body.f(xe)), float(body.g(xe))
        if fe + ge > 0.0:
            ys = np.linspace(-ge, fe, 17)
            pieces.append(np.stack([np.full_like(ys, xe), ys], axis=1))
    return np.concatenate(pieces, axis=0)


def measures(body: ConvexBody) -> Measures:
    """Area, perimeter, diameter (diameter to 1e-6 relative for curved bodies)."""
    if isinstance(body, ConvexPolygon):
        v = body.vertices
        diff = v[:, None, :] - v[None, :, :]
        diam = float(np.max(np.linalg.norm(diff, axis=2)))
        return Measures(body.area, body.perimeter(), diam)

    per = 0.0
    for h in (body.f, body.g):
        val, _ = _quad_height(lambda x, h=h: math.hypot(1.0, float(h.derivative(x))),
                              body.a, body.b, h.breakpoints(), epsabs=1e-10)
        per += val
    for xe in (body.a, body.b):
        per += float(body.f(xe)) + float(body.g(xe))

    pts = graph_boundary_points(body, n=2048)
    ang = np.linspace(0.0, np.pi, 1441)[:-1]
    dirs = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    proj = pts @ dirs.T
    diam = float(np.max(proj.max(axis=0) - proj.min(axis=0)))
    return Measures(body.area, per, diam)


# ---------------------------------------------------------------------------
# symmetry


def is_symmetric(body: ConvexBody, tol: float | None = None) -> tuple[bool, Point2]:
    """Central symmetry about the centroid; returns (flag, center).

    Polygons use exact vertex-negation matching; graph bodies compare the
    reflected upper boundary with the lower one by vertical deviation (which
    dominates the Hausdorff distance between the two boundary curves).
    """
    c = centroid(body)
    if isinstance(body, ConvexPolygon):
        if tol is None:
            tol = 1e-9 * measures(body).diameter
        v = body.vertices
        m = len(v)
        if m % 2 != 0:
            return False, c
        w = 2.0 * np.array(c) - v  # reflection, same cyclic orientation
        j = int(np.argmin(np.linalg.norm(w[0] - v, axis=1)))
        dev = float(np.max(np.linalg.norm(w - np.roll(v, -j, axis=0), axis=1)))
        return dev <= tol, c

    if tol is None:
        tol = 1e-9 * measures(body).diameter
    if abs(c.x - 0.5 * (body.a + body.b)) > tol:
        return False, c
    xs = np.linspace(body.a, body.b, 257)
    dev = np.max(np.abs(body.f(xs) - (2.0 * c.y + body.g(2.0 * c.x - xs))))
    return float(dev) <= tol, c


# ---------------------------------------------------------------------------
# affine maps and edge normalization


@dataclass(frozen=True)
class AffineMap:
    """x -> linear @ x + shift."""

    linear: np.ndarray  # (2, 2)
    shift: np.ndarray  # (2,)

    @staticmethod
    def identity() -> "AffineMap":
        return AffineMap(np.eye(2), np.zeros(2))

    def apply(self, points):
        p = np.asarray(points, dtype=float)
        return p @ self.linear.T + self.shift

    def apply_polygon(self, poly: ConvexPolygon) -> ConvexPolygon:
        return validate_polygon(self.apply(poly.vertices))

    def inverse(self) -> "AffineMap":
        inv = np.linalg.inv(self.linear)
        return AffineMap(inv, -inv @ self.shift)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.linear))


def normalize_edge_to_standard(poly: ConvexPolygon, edge_index: int) -> tuple[ConvexPolygon, AffineMap]:
    """Linear map sending edge `edge_index` onto the segment (1/2,-1/2)..(1/2,1/2).

    Requires a polygon symmetric about the origin; the opposite edge lands on
    the negated segment and the image contains the unit square.
    """
    sym, c = is_symmetric(poly)
    if not sym or math.hypot(*c) > 1e-9 * poly.scale():
        raise NotSymmetricError("polygon must be symmetric about the origin")
    m = poly.m
    p = poly.vertices[edge_index % m]
    r = poly.vertices[(edge_index + 1) % m]
    if abs(cross2(p, r)) <= 1e-12 * poly.scale() ** 2:
        raise EdgeThroughOriginError("edge lies on a line through the origin")
    src = np.column_stack([p, r])
    dst = np.column_stack([(0.5, -0.5), (0.5, 0.5)])
    lin = dst @ np.linalg.inv(src)
    amap = AffineMap(lin, np.zeros(2))
    return amap.apply_polygon(poly), amap


# ---------------------------------------------------------------------------
# containment and chains


def inside_margin(poly: ConvexPolygon, points) -> np.ndarray:
    """Min over edges of the signed distance to the edge line (positive inside).

    For interior points this is the exact distance to the boundary; for
    exterior points it is <= -(distance to the most violated supporting line),
    which is the conservative direction for margin tests.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    v = poly.vertices
    d = poly.edge_vectors()
    ln = np.linalg.norm(d, axis=1)
    rel_x = pts[:, None, 0] - v[None, :, 0]
    rel_y = pts[:, None, 1] - v[None, :, 1]
    cr = d[None, :, 0] * rel_y - d[None, :, 1] * rel_x
    return np.min(cr / ln[None, :], axis=1)


def point_in_polygon(poly: ConvexPolygon, point, tol: float = 0.0) -> bool:
    return bool(inside_margin(poly, point)[0] >= -tol)


def _chain_indices(poly: ConvexPolygon, upper: bool) -> list[int]:
    """Vertex indices of the upper (or lower) boundary chain, left to right.

    The chain excludes vertical end edges; ties at the extreme x pick the
    vertex adjacent to the chain (max y for upper, min y for lower).
    """
    v = poly.vertices
    m = len(v)
    tol = 1e-12 * poly.scale()
    xmin, xmax = float(np.min(v[:, 0])), float(np.max(v[:, 0]))

    def pick(xval, want_top):
        idx = [i for i in range(m) if abs(v[i, 0] - xval) <= tol]
        key = (lambda i: v[i, 1]) if want_top else (lambda i: -v[i, 1])
        return max(idx, key=key)

    if upper:
        start = pick(xmax, True)   # top of right side, walk ccw to the left
        stop = pick(xmin, True)
    else:
        start = pick(xmin, False)  # bottom of left side, walk ccw to the right
        stop = pick(xmax, False)
    chain = [start]
    i = start
    while i != stop:
        i = (i + 1) % m
        chain.append(i)
        if len(chain) > m:
            raise DegenerateError("boundary chain did not close")
    if upper:
        chain.reverse()  # left-to-right
    return chain


def height_profile(body: ConvexBody) -> HeightFn:
    """Upper boundary y = u(x) as a height function on [xmin, xmax]."""
    if isinstance(body, GraphBody):
        return body.f
    idx = _chain_indices(body, upper=True)
    v = body.vertices[idx]
    return heights.piecewise(v[:, 0], v[:, 1])


def _standard_position_check(poly: ConvexPolygon, tol: float) -> None:
    if np.max(np.abs(poly.vertices[:, 0])) > 0.5 + tol:
        raise NotStandardPositionError("polygon leaks out of the slab |x| <= 1/2")
    corners = np.array([(0.5, -0.5), (0.5, 0.5), (-0.5, 0.5), (-0.5, -0.5)])
    if np.min(inside_margin(poly, corners)) < -tol:
        raise NotStandardPositionError("polygon does not contain the unit square")


def decompose_caps(poly: ConvexPolygon, tol: float = 1e-9) -> tuple[ConvexPolygon, GraphBody, GraphBody]:
    """Split a standard-position polygon into the unit square and two caps.

    Caps are returned as graph bodies over [-1/2, 1/2] with g == 0; their f is
    the cap height measured from the square's edge (the cap above y = 1/2 and
    the mirror of the cap below y = -1/2, both in left-to-right x).
    Areas satisfy |poly| = 1 + |upper| + |lower| within 1e-10.
    """
    _standard_position_check(poly, tol)

    def cap_from_chain(upper: bool) -> GraphBody:
        idx = _chain_indices(poly, upper=upper)
        v = poly.vertices[idx]
        knots = np.clip(v[:, 0], -0.5, 0.5)
        knots[0], knots[-1] = -0.5, 0.5
        hts = v[:, 1] - 0.5 if upper else -0.5 - v[:, 1]
        hts = np.maximum(hts, 0.0)
        # merge knots that collide after clipping
        keep = np.concatenate([[True], np.diff(knots) > 1e-12])
        f = heights.piecewise(knots[keep], hts[keep])
        return GraphBody(-0.5, 0.5, f, heights.zero())

    return unit_square(), cap_from_chain(True), cap_from_chain(False)


# ---------------------------------------------------------------------------
# fan triangulation


@dataclass(frozen=True)
class FanTriangle:
    indices: tuple[int, int, int]
    points: np.ndarray  # (3, 2)
    area: float


def fan_triangles(poly: ConvexPolygon, apex: int = 0) -> list[FanTriangle]:
    """The m - 2 triangles (v_apex, v_j, v_j+1); areas positive, summing to |poly|."""
    v = poly.vertices
    m = len(v)
    apex %= m
    out = []
    for step in range(1, m - 1):
        j = (apex + step) % m
        k = (apex + step + 1) % m
        tri = np.array([v[apex], v[j], v[k]])
        a = 0.5 * cross2(tri[1] - tri[0], tri[2] - tri[0])
        out.append(FanTriangle((apex, j, k), tri, float(a)))
    return out


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class Lattice:
    """Integer combinations of two independent generators."""

    g1: Point2
    g2: Point2

    def __post_init__(self):
        sc = max(abs(self.g1.x), abs(self.g1.y), abs(self.g2.x), abs(self.g2.y))
        if abs(cross2(self.g1, self.g2)) <= 1e-12 * sc * sc:
            raise DegenerateError("lattice generators are linearly dependent")

    @staticmethod
    def from_matrix(basis) -> "Lattice":
        b = np.asarray(basis, dtype=float)
        return Lattice(Point2(b[0, 0], b[1, 0]), Point2(b[0, 1], b[1, 1]))

    def basis(self) -> np.ndarray:
        """Generators as the columns of a 2x2 matrix."""
        return np.array([[self.g1.x, self.g2.x], [self.g1.y, self.g2.y]],
                        dtype=float)

    @property
    def covolume(self) -> float:
        return abs(cross2(self.g1, self.g2))


Z2 = Lattice(E1, E2)
