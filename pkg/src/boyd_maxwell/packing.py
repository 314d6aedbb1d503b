"""Balls carried by space-like vectors of a Lorentz space, and packing checks.

Work in the coordinates of a :class:`~boyd_maxwell.quadratic.LorentzFrame`,
where the form is ``|x'|^2 - x_r^2`` and past-directed vectors have ``x_r > 0``.
A point ``u`` of the unit sphere stands for the light-like direction
``(u, 1)``. The ball of a unit space-like vector ``(x', x_r)`` is the cap
``{u : u . x' >= x_r}``, centred at ``x' / |x'|`` with angular radius
``arccos(x_r / |x'|)``; the sphere is mapped to ``R^(d)`` by stereographic
projection from its last axis.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

import numpy as np

from .errors import NotSpaceLike, UnsupportedDimension
from .quadratic import TOL, LorentzFrame

TANGENCY_TOL = 1e-6
_BLOCK = 512


class Relation(str, Enum):
    DISJOINT = "disjoint"
    TANGENT = "tangent"
    OVERLAP = "overlap"
    HEAVY_OVERLAP = "heavy-overlap"
    CONTAINED = "contained"


@dataclass(frozen=True)
class PairRelation:
    relation: Relation
    value: float


def classify_product(value: float, tol: float = TANGENCY_TOL) -> Relation:
    """Relation of two balls from the form value of their unit vectors."""
    if value < -1 - tol:
        return Relation.DISJOINT
    if value <= -1 + tol:
        return Relation.TANGENT
    if value <= 0:
        return Relation.OVERLAP
    if value < 1 - tol:
        return Relation.HEAVY_OVERLAP
    return Relation.CONTAINED


def normalize(x, B, frame: LorentzFrame | None = None, tol: float = TOL) -> np.ndarray:
    """``x / sqrt(B(x, x))``, flipped to be past-directed when a frame is given."""
    x = np.asarray(x, dtype=float)
    B = np.asarray(B, dtype=float)
    q = float(x @ B @ x)
    if q <= tol:
        raise NotSpaceLike(f"B(x, x) = {q:.3g} is not positive")
    y = x / math.sqrt(q)
    if frame is not None and frame(y)[-1] < 0:
        y = -y
    return y


def pair_relation(x, y, B, tol: float = TANGENCY_TOL) -> PairRelation:
    """Relation between the balls of two space-like vectors (taken as given,
    without any change of sign)."""
    B = np.asarray(B, dtype=float)
    xn = np.asarray(x, dtype=float)
    yn = np.asarray(y, dtype=float)
    qx, qy = float(xn @ B @ xn), float(yn @ B @ yn)
    if qx <= TOL or qy <= TOL:
        raise NotSpaceLike("pair_relation needs two space-like vectors")
    v = float(xn @ B @ yn) / math.sqrt(qx * qy)
    return PairRelation(classify_product(v, tol), v)


@dataclass(frozen=True)
class Ball:
    """Closed ball in ``R^dim`` with signed curvature.

    Curvature 0 is the half-space ``{p : normal . p >= offset}`` (``center`` is
    ``None``). Negative curvature is the closure of the outside of the sphere
    of radius ``1 / |curvature|``.
    """

    dim: int
    center: np.ndarray | None
    curvature: float
    source: np.ndarray = field(repr=False)
    normal: np.ndarray | None = None
    offset: float = 0.0
    word_length: int | None = None

    @property
    def radius(self) -> float:
        return math.inf if self.curvature == 0 else 1.0 / abs(self.curvature)

    @property
    def is_half_space(self) -> bool:
        return self.curvature == 0

    def signed_distance(self, p) -> float:
        """Negative inside, zero on the boundary, positive outside."""
        p = np.asarray(p, dtype=float)
        if self.is_half_space:
            return float(self.offset - self.normal @ p)
        d = float(np.linalg.norm(p - self.center)) - self.radius
        return d if self.curvature > 0 else -d

    def to_json(self) -> dict:
        out = {
            "center": None if self.center is None else self.center.tolist(),
            "curvature": self.curvature,
            "source_vector": self.source.tolist(),
            "word_length": self.word_length,
        }
        if self.is_half_space:
            out["normal"] = self.normal.tolist()
            out["offset"] = self.offset
        return out


def stereographic(u) -> np.ndarray:
    """Projection of the unit sphere from ``(0, ..., 0, 1)`` to the equatorial plane."""
    u = np.asarray(u, dtype=float)
    return u[:-1] / (1.0 - u[-1])


def ball_of_vector(x, frame: LorentzFrame, tol: float = TOL, word_length: int | None = None) -> Ball:
    """Ball of a space-like vector via its cap on the sphere.

    The cap boundary is located by the two extreme points of the cap on the
    meridian through the projection pole; their images are antipodal on the
    boundary sphere of the ball, unless one of them is the pole itself.
    """
    x = np.asarray(x, dtype=float)
    y = frame(x)
    xs, xr = y[:-1], y[-1]
    q = float(xs @ xs - xr * xr)
    if q <= tol:
        raise NotSpaceLike(f"B(x, x) = {q:.3g} is not positive")
    xs, xr = xs / math.sqrt(q), xr / math.sqrt(q)
    dim = len(xs) - 1
    norm = float(np.linalg.norm(xs))
    c = xs / norm
    theta = math.acos(max(-1.0, min(1.0, xr / norm)))
    pole = np.zeros(dim + 1)
    pole[-1] = 1.0
    # unit vector in the meridian plane, orthogonal to c, pointing to the pole
    e = pole - (pole @ c) * c
    if np.linalg.norm(e) < 1e-12:
        e = np.zeros(dim + 1)
        e[0] = 1.0
        e = e - (e @ c) * c
    e /= np.linalg.norm(e)
    ends = [math.cos(theta) * c + math.sin(theta) * e, math.cos(theta) * c - math.sin(theta) * e]
    pole_gap = [1.0 - float(p[-1]) for p in ends]
    inside = float(pole @ c) - math.cos(theta)  # > 0 when the pole is inside the cap
    if min(pole_gap) <= 1e-12 or abs(inside) <= 1e-14:
        # boundary through the pole: a half-space
        k = int(np.argmax(pole_gap))
        P = stereographic(ends[k])
        n = P / np.linalg.norm(P) if np.linalg.norm(P) > 0 else c[:-1] / np.linalg.norm(c[:-1])
        m = stereographic(c) if float(c[-1]) < 1 - 1e-12 else None
        # orient the normal into the cap
        if m is not None and n @ m < n @ P:
            n = -n
        return Ball(dim, None, 0.0, x, normal=n, offset=float(n @ P), word_length=word_length)
    P1, P2 = stereographic(ends[0]), stereographic(ends[1])
    center = (P1 + P2) / 2
    r = float(np.linalg.norm(P1 - P2)) / 2
    curv = 1.0 / r if inside < 0 else -1.0 / r
    return Ball(dim, center, curv, x, word_length=word_length)


def plane_point(p, frame: LorentzFrame) -> np.ndarray:
    """Image in ``R^d`` of the direction of a light-like vector."""
    y = frame(p)
    if abs(y[-1]) < 1e-15:
        raise ValueError("vector has no direction on the sphere")
    return stereographic(y[:-1] / y[-1])


def inside_margin(ball_vector, p, frame: LorentzFrame) -> float:
    """``B(x_hat, (u, 1))`` for the sphere point ``u`` of ``p``: positive
    exactly when ``u`` lies in the interior of the ball of ``x``."""
    x = frame(ball_vector)
    x = x / math.sqrt(float(x[:-1] @ x[:-1] - x[-1] ** 2))
    y = frame(p)
    u = y[:-1] / y[-1]
    return float(x[:-1] @ u - x[-1])


def euclidean_product(b1: Ball, b2: Ball) -> float:
    """Cosine of the angle between the boundary spheres of two non-half-space
    balls, from centres and signed radii: ``(r1^2 + r2^2 - d^2) / (2 r1 r2)``.

    It equals the form value of the two unit vectors.
    """
    if b1.is_half_space or b2.is_half_space:
        raise ValueError("half-spaces have no centre")
    r1, r2 = 1.0 / b1.curvature, 1.0 / b2.curvature
    d2 = float(np.sum((b1.center - b2.center) ** 2))
    return (r1 * r1 + r2 * r2 - d2) / (2 * r1 * r2)


def euclidean_relation(b1: Ball, b2: Ball, tol: float = TANGENCY_TOL) -> Relation:
    return classify_product(euclidean_product(b1, b2), tol)


# -- packings ---------------------------------------------------------------------

@dataclass
class PackingReport:
    ball_count: int
    histogram: dict[str, int]
    future_directed: int
    violations: list[tuple[int, int, float]]

    @property
    def is_packing(self) -> bool:
        bad = sum(self.histogram.get(r.value, 0) for r in (Relation.OVERLAP, Relation.HEAVY_OVERLAP, Relation.CONTAINED))
        return bad == 0 and self.future_directed <= 1

    def to_json(self) -> dict:
        return {
            "ball_count": self.ball_count,
            "histogram": self.histogram,
            "future_directed": self.future_directed,
            "is_packing": self.is_packing,
            "violations": [list(v) for v in self.violations],
        }


def _unit_rows(vectors, B, tol: float = TOL, dtype=float) -> np.ndarray:
    if len(vectors) == 0:
        return np.zeros((0, B.shape[0]), dtype=dtype)
    X = np.array([np.asarray(v, dtype=dtype) for v in vectors]).reshape(len(vectors), -1)
    B = B.astype(dtype)
    q = np.einsum("ij,jk,ik->i", X, B, X)
    if (q <= tol).any():
        raise NotSpaceLike("every vector of a packing must be space-like")
    return X / np.sqrt(q)[:, None]


# values this close to a bin edge are recomputed from the extended-precision vectors
_REFINE_BAND = 1e-4


def pair_values(vectors, B):
    """Yield ``(i, j, value)`` blocks of form values of unit vectors, ``i < j``.

    ``vectors`` are arrays or orbit elements. When every element carries an
    extended-precision copy, values near ``-1``, ``0`` and ``1`` are refined with it.
    """
    B = np.asarray(B, dtype=float)
    items = list(vectors)
    X = _unit_rows([getattr(v, "vector", v) for v in items], B)
    precise = [getattr(v, "precise", None) for v in items]
    XL = _unit_rows(precise, B, dtype=np.longdouble) if items and all(p is not None for p in precise) else None
    XB = X @ B
    XLB = XL @ B.astype(np.longdouble) if XL is not None else None
    n = len(X)
    for start in range(0, n, _BLOCK):
        stop = min(n, start + _BLOCK)
        M = XB[start:stop] @ X.T
        if XLB is not None:
            ks, js = np.nonzero(M > -1 - _REFINE_BAND)  # most pairs are well separated
            v = M[ks, js]
            keep = (js > start + ks) & (np.minimum(np.abs(v + 1), np.minimum(np.abs(v), np.abs(v - 1))) < _REFINE_BAND)
            ks, js = ks[keep], js[keep]
            M[ks, js] = np.einsum("ij,ij->i", XL[js], XLB[start + ks]).astype(float)
        for k in range(stop - start):
            i = start + k
            js, vals = np.arange(i + 1, n), M[k, i + 1:]
            yield i, js, vals


def verify_packing(vectors, B, t=None, tol: float = TANGENCY_TOL, max_violations: int = 50) -> PackingReport:
    """All-pairs check of the balls of ``vectors`` (space-like, used as given).

    ``t`` is the direction of past; vectors with ``B(x, t) > 0`` are future-directed.
    """
    B = np.asarray(B, dtype=float)
    vectors = list(vectors)
    edges = np.array([-np.inf, -1 - tol, -1 + tol, 0.0, 1 - tol, np.inf])
    names = [Relation.DISJOINT, Relation.TANGENT, Relation.OVERLAP, Relation.HEAVY_OVERLAP, Relation.CONTAINED]
    hist = Counter()
    violations: list[tuple[int, int, float]] = []
    for i, js, vals in pair_values(vectors, B):
        if not len(vals):
            continue
        # right-closed bins except the first: (-inf, -1-tol), [-1-tol, -1+tol], (-1+tol, 0], (0, 1-tol), [1-tol, inf)
        idx = np.where(vals < edges[1], 0,
               np.where(vals <= edges[2], 1,
               np.where(vals <= edges[3], 2,
               np.where(vals < edges[4], 3, 4))))
        counts = np.bincount(idx, minlength=5)
        for k, name in enumerate(names):
            if counts[k]:
                hist[name.value] += int(counts[k])
        if len(violations) < max_violations:
            for j, v in zip(js[idx >= 2], vals[idx >= 2]):
                violations.append((i, int(j), float(v)))
                if len(violations) >= max_violations:
                    break
    future = 0
    if t is not None:
        t = np.asarray(t, dtype=float)
        future = sum(1 for v in vectors if float(np.asarray(getattr(v, "vector", v)) @ B @ t) > 0)
    return PackingReport(len(vectors), dict(hist), future, violations)


def tangency_graph(vectors, B, tol: float = TANGENCY_TOL) -> list[tuple[int, int]]:
    """Pairs of balls whose unit vectors have form value ``-1`` within ``tol``."""
    edges = []
    for i, js, vals in pair_values(vectors, B):
        for j in js[np.abs(vals + 1) <= tol]:
            edges.append((i, int(j)))
    return edges


def tangent_quadruples(edges: list[tuple[int, int]]) -> list[tuple[int, int, int, int]]:
    """Mutually tangent 4-cliques of a tangency graph."""
    adj: dict[int, set[int]] = {}
    for i, j in edges:
        adj.setdefault(i, set()).add(j)
        adj.setdefault(j, set()).add(i)
    out = []
    for a in sorted(adj):
        higher = sorted(v for v in adj[a] if v > a)
        for b, c in combinations(higher, 2):
            if c not in adj[b]:
                continue
            for d in sorted(adj[a] & adj[b] & adj[c]):
                if d > c:
                    out.append((a, b, c, d))
    return out


def descartes_defect(curvatures) -> float:
    """Relative defect of ``(sum k)^2 = 2 sum k^2``."""
    k = np.asarray(curvatures, dtype=float)
    lhs, rhs = k.sum() ** 2, 2 * (k * k).sum()
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


# -- SVG ----------------------------------------------------------------------

@dataclass
class SvgOptions:
    width: int = 800
    height: int = 800
    viewbox: tuple[float, float, float, float] | None = None  # xmin, ymin, xmax, ymax
    points: np.ndarray | None = None
    point_radius: float = 0.002
    stroke_width: float = 0.002


def _color(curvature: float) -> str:
    if curvature <= 0:
        return "#e8e8e8"
    hue = (math.log1p(curvature) * 47) % 360
    return f"hsl({hue:.1f},60%,65%)"


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def render_svg(balls: list[Ball], options: SvgOptions | None = None) -> str:
    """SVG 1.1 drawing of planar balls; output depends only on the input order."""
    opt = options or SvgOptions()
    if any(b.dim != 2 for b in balls):
        raise UnsupportedDimension("only 2-dimensional balls can be drawn")
    if opt.viewbox is not None:
        x0, y0, x1, y1 = opt.viewbox
    else:
        finite = [b for b in balls if b.curvature != 0]
        pos = [b for b in finite if b.curvature > 0] or finite
        if pos:
            lo = np.min([b.center - b.radius for b in pos], axis=0)
            hi = np.max([b.center + b.radius for b in pos], axis=0)
        else:
            lo, hi = np.array([-1.0, -1.0]), np.array([1.0, 1.0])
        pad = 0.02 * float(max(hi - lo))
        x0, y0, x1, y1 = lo[0] - pad, lo[1] - pad, hi[0] + pad, hi[1] + pad
    w, h = x1 - x0, y1 - y0
    sw = _fmt(opt.stroke_width * max(w, h))
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{opt.width}" height="{opt.height}" '
        f'viewBox="{_fmt(x0)} {_fmt(-y1)} {_fmt(w)} {_fmt(h)}">',
        f'<defs><clipPath id="view"><rect x="{_fmt(x0)}" y="{_fmt(-y1)}" width="{_fmt(w)}" height="{_fmt(h)}"/></clipPath></defs>',
        '<g clip-path="url(#view)">',
    ]
    big = 4 * max(w, h)
    for b in balls:
        if b.is_half_space:
            # the half-plane clipped to a large square around the view
            n = np.asarray(b.normal, dtype=float)
            tang = np.array([-n[1], n[0]])
            foot = n * b.offset
            corners = [foot + big * tang, foot + big * tang + big * n, foot - big * tang + big * n, foot - big * tang]
            pts = " ".join(f"{_fmt(p[0])},{_fmt(-p[1])}" for p in corners)
            lines.append(f'<polygon points="{pts}" fill="{_color(0)}" stroke="black" stroke-width="{sw}"/>')
        elif b.curvature < 0:
            lines.append(
                f'<circle cx="{_fmt(b.center[0])}" cy="{_fmt(-b.center[1])}" r="{_fmt(b.radius)}" '
                f'fill="none" stroke="black" stroke-width="{sw}"/>'
            )
        else:
            lines.append(
                f'<circle cx="{_fmt(b.center[0])}" cy="{_fmt(-b.center[1])}" r="{_fmt(b.radius)}" '
                f'fill="{_color(b.curvature)}" stroke="black" stroke-width="{sw}"/>'
            )
    if opt.points is not None:
        pr = _fmt(opt.point_radius * max(w, h))
        for p in np.asarray(opt.points).reshape(-1, 2):
            lines.append(f'<circle cx="{_fmt(p[0])}" cy="{_fmt(-p[1])}" r="{pr}" fill="black"/>')
    lines += ["</g>", "</svg>"]
    return "\n".join(lines) + "\n"
