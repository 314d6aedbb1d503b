"""Solving for the label of a dashed edge so that the Gram matrix becomes singular.

With every other entry fixed, ``det B`` is a polynomial of degree at most 2 in
the dashed value ``c`` (the entry is ``-c``). It is recovered by evaluating at
``c = 0, 1, 2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import AmbiguousRoot, NoValidRoot
from ..graph import INF, CoxeterGraph, corank
from ..quadratic import TOL

# roots closer than this are one (double) root
ROOT_MERGE = 1e-7


class ResolvedCase(str, Enum):
    PRISM = "prism"
    PYRAMID = "pyramid"


@dataclass(frozen=True)
class DashedSolution:
    c: float
    case: ResolvedCase
    graph: CoxeterGraph

    @property
    def label(self):
        return INF if self.case is ResolvedCase.PYRAMID else -self.c


def determinant_in_c(G: CoxeterGraph, edge: tuple[int, int]) -> np.ndarray:
    """Coefficients ``(a2, a1, a0)`` of ``det B(c)``; the current label on ``edge`` is ignored."""
    i, j = edge
    B = G.gram.copy()

    def det(c):
        B[i, j] = B[j, i] = -c
        return np.linalg.det(B)

    d0, d1, d2 = det(0.0), det(1.0), det(2.0)
    a2 = (d2 - 2 * d1 + d0) / 2
    a1 = d1 - d0 - a2
    return np.array([a2, a1, d0])


def _real_roots(coef: np.ndarray) -> list[float]:
    a2, a1, a0 = coef
    scale = max(np.abs(coef).max(), 1e-300)
    if abs(a2) <= 1e-12 * scale:
        if abs(a1) <= 1e-12 * scale:
            return []
        return [-a0 / a1]
    disc = a1 * a1 - 4 * a2 * a0
    if disc < 0:
        # a slightly negative discriminant is a numerically split double root
        if disc >= -1e-10 * max(a1 * a1, abs(4 * a2 * a0), 1e-300):
            return [-a1 / (2 * a2)]
        return []
    s = np.sqrt(disc)
    q = -0.5 * (a1 + np.copysign(s, a1)) if a1 != 0 else -0.5 * s
    roots = [q / a2, a0 / q] if q != 0 else [0.0]
    return sorted(roots)


def solve_dashed_label(G: CoxeterGraph, edge: tuple[int, int], tol: float = TOL) -> DashedSolution:
    """Value ``c >= 1`` on ``edge`` that gives corank 1.

    ``c = 1`` (within ``tol``) becomes a label-infinity edge (pyramid case);
    ``c > 1`` stays dashed (prism case).
    """
    i, j = edge
    roots = [r for r in _real_roots(determinant_in_c(G, edge)) if r >= 1 - tol]
    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= ROOT_MERGE * max(1.0, abs(r)):
            continue
        merged.append(r)
    if not merged:
        raise NoValidRoot(f"no root c >= 1 for the dashed edge {edge}")
    if len(merged) > 1:
        raise AmbiguousRoot(merged)
    c = merged[0]
    if abs(c - 1) <= tol:
        sol = DashedSolution(1.0, ResolvedCase.PYRAMID, G.with_edge(i, j, INF))
    else:
        sol = DashedSolution(float(c), ResolvedCase.PRISM, G.with_edge(i, j, -float(c)))
    if corank(sol.graph, tol) != 1:
        raise NoValidRoot(f"root c = {c!r} does not give corank 1")
    return sol
