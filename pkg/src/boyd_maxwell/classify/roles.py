"""Vertex roles of corank-0 graphs.

Notation: an ``(l, k)``-graph has graph level ``l`` and corank ``k``; a strict
one has only finite remainders after deleting ``l`` vertices.

* real: deleting the vertex leaves a ``(1, 0)``-graph,
* ideal: deleting the vertex leaves an affine graph,
* surreal: deleting the vertex leaves a ``(2, 0)``-graph,
* port: a vertex ``u`` of a ``(1^s, 0)``-graph ``H`` that receives an edge in
  some extension ``H + v`` which is a ``(2^s, 0)``-graph with ``v`` its only
  real vertex. It suffices to try ``v`` joined to ``u`` alone by a label 3.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from ..graph import CoxeterGraph, GraphType, classify_type, corank, graph_level
from ..quadratic import TOL

EXTENSION_LABELS = (2, 3, 4, 5, 6)


def lk_type(G: CoxeterGraph, tol: float = TOL) -> tuple[int, int, bool]:
    """``(level, corank, strict)`` of a graph."""
    lev, strict = graph_level(G, tol)
    return lev, corank(G, tol), strict


def is_lk(G: CoxeterGraph, level: int, k: int = 0, strict: bool | None = None, tol: float = TOL) -> bool:
    if corank(G, tol) != k:
        return False
    lev, st = graph_level(G, tol)
    return lev == level and (strict is None or st == strict)


def real_vertices(G: CoxeterGraph) -> list[int]:
    return [x for x in range(G.n) if is_lk(G.delete(x), 1)]


def ideal_vertices(G: CoxeterGraph) -> list[int]:
    return [x for x in range(G.n) if classify_type(G.delete(x)) is GraphType.AFFINE]


def surreal_vertices(G: CoxeterGraph) -> list[int]:
    return [x for x in range(G.n) if is_lk(G.delete(x), 2)]


def hinge(G: CoxeterGraph) -> tuple[int, ...] | None:
    """The hinge of a ``(1, 0)``-graph (its unique ideal vertex) or of a
    ``(2, 0)``-graph (its two real vertices, when deleting both leaves an
    affine graph). ``None`` when there is none."""
    if corank(G) != 0:
        return None
    lev, _ = graph_level(G)
    if lev == 1:
        ideal = ideal_vertices(G)
        return tuple(ideal) if len(ideal) == 1 else None
    if lev == 2:
        real = real_vertices(G)
        if len(real) == 2 and classify_type(G.delete(*real)) is GraphType.AFFINE:
            return tuple(real)
    return None


def has_unique_real(G: CoxeterGraph, v: int) -> bool:
    """Whether ``G`` is a ``(2^s, 0)``-graph whose only real vertex is ``v``."""
    if not is_lk(G, 2, 0, strict=True):
        return False
    return all(is_lk(G.delete(x), 1) == (x == v) for x in range(G.n))


@lru_cache(maxsize=None)
def unique_real_extensions(H: CoxeterGraph, labels: tuple = EXTENSION_LABELS) -> tuple[tuple, ...]:
    """Rows ``r`` such that ``H + r`` is a ``(2^s, 0)``-graph in which the new
    vertex is the only real vertex (the all-2 row, an isolated vertex, included)."""
    return tuple(row for row in product(labels, repeat=H.n) if has_unique_real(H.extend(row), H.n))


def is_port(H: CoxeterGraph, u: int) -> bool:
    """Port test by a single label-3 edge to ``u``."""
    return has_unique_real(H.extend({u: 3}), H.n)


def ports(H: CoxeterGraph) -> list[int]:
    return [u for u in range(H.n) if is_port(H, u)]


@dataclass(frozen=True)
class VertexRole:
    vertex: int
    real: bool
    ideal: bool
    surreal: bool
    port: bool
    hinge: bool

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in ("vertex", "real", "ideal", "surreal", "port", "hinge")}


def vertex_roles(G: CoxeterGraph) -> list[VertexRole]:
    real = set(real_vertices(G))
    ideal = set(ideal_vertices(G))
    surreal = set(surreal_vertices(G))
    h = set(hinge(G) or ())
    strict_lanner = is_lk(G, 1, 0, strict=True)
    return [
        VertexRole(x, x in real, x in ideal, x in surreal, strict_lanner and is_port(G, x), x in h)
        for x in range(G.n)
    ]


def real_pairs_with_affine_rest(G: CoxeterGraph) -> list[tuple[int, int]]:
    """All pairs of real vertices whose joint removal leaves an affine graph."""
    real = real_vertices(G)
    return [p for p in combinations(real, 2) if classify_type(G.delete(*p)) is GraphType.AFFINE]
