"""Enumeration of connected Coxeter graphs by graph level.

Deleting a vertex from a graph of level ``<= l`` (``l >= 1``) leaves a graph of
level ``<= l - 1``, and every connected graph has a vertex whose removal keeps
it connected. Connected graphs of level ``<= l`` and rank ``n`` are therefore
one-vertex extensions of connected graphs of level ``<= l - 1`` and rank
``n - 1``. Level-0 graphs extend level-0 graphs.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from ..errors import UnboundedFamily
from ..graph import INF, CoxeterGraph, gram_entry, graph_level
from ..quadratic import TOL
from .isomorphism import canonical_form

SOLID_LABELS = (3, 4, 5, 6, INF)
# above this size, small connected subsets are left to the final batched check
_PRUNE_SIZE = 4


def _labels_for(rank: int, level: int, label_bound: int | None, allow_infinity: bool) -> tuple:
    if rank >= level + 3:
        # every edge lies in a connected rank-3 subgraph that must be finite or
        # affine, which forces labels <= 6 (inf only occurs in rank 2)
        labels = (3, 4, 5, 6)
    elif label_bound is None:
        raise UnboundedFamily(
            f"connected graphs of rank {rank} and level <= {level} have unbounded labels; pass label_bound"
        )
    else:
        labels = tuple(range(3, label_bound + 1))
    if allow_infinity:
        labels = labels + (INF,)
    return labels


def _min_eig(B: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(B)[0])


class _Extender:
    """Depth-first assignment of the labels joining a new vertex to a base graph."""

    def __init__(self, base: CoxeterGraph, level: int, labels: tuple, tol: float):
        self.base = base
        self.m = base.n
        self.n = base.n + 1
        self.level = level
        self.labels = labels
        self.tol = tol
        self.keep = self.n - level  # size of the subgraphs that must be finite/affine
        self.B0 = base.gram
        self.adj = [set(base.neighbors(v)) for v in range(self.m)]
        self.cache: dict = {}

    def _ok(self, verts: tuple[int, ...], row: list) -> bool:
        k = len(verts)
        key = (verts, tuple(row[v] for v in verts))
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        B = np.eye(k + 1)
        B[:k, :k] = self.B0[np.ix_(verts, verts)]
        for a, v in enumerate(verts):
            B[a, k] = B[k, a] = gram_entry(row[v])
        ok = _min_eig(B) >= -self.tol
        self.cache[key] = ok
        return ok

    def _connected(self, verts, row) -> bool:
        """Whether ``verts`` plus the new vertex induce a connected graph."""
        verts = set(verts)
        seen = {v for v in verts if row[v] != 2}
        stack = list(seen)
        while stack:
            v = stack.pop()
            for u in self.adj[v] & verts:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return seen == verts

    def _prune(self, i: int, row: list) -> bool:
        limit = min(_PRUNE_SIZE, self.keep) - 2
        others = list(range(i))
        for r in range(0, limit + 1):
            for S in combinations(others, r):
                verts = tuple(sorted(S + (i,)))
                if not self._connected(verts, row):
                    continue
                if not self._ok(verts, row):
                    return False
        return True

    def _final(self, row: list) -> bool:
        size = self.keep - 1  # vertices of the base kept alongside the new vertex
        if size <= 0:
            return True
        touched = [v for v in range(self.m) if row[v] != 2]
        subsets = [S for S in combinations(range(self.m), size) if any(row[v] != 2 for v in S)]
        if not subsets or not touched:
            return True
        idx = np.array(subsets)
        B = np.zeros((len(subsets), size + 1, size + 1))
        B[:, :size, :size] = self.B0[idx[:, :, None], idx[:, None, :]]
        col = np.array([gram_entry(row[v]) for v in range(self.m)])
        B[:, :size, size] = col[idx]
        B[:, size, :size] = col[idx]
        B[:, size, size] = 1.0
        return bool(np.linalg.eigvalsh(B)[:, 0].min() >= -self.tol)

    def rows(self):
        row = [2] * self.m
        choices = (2,) + self.labels

        def dfs(i):
            if i == self.m:
                if any(r != 2 for r in row) and self._final(row):
                    yield list(row)
                return
            for lab in choices:
                row[i] = lab
                if lab == 2 or self._prune(i, row):
                    yield from dfs(i + 1)
            row[i] = 2

        yield from dfs(0)


def extensions(base: CoxeterGraph, level: int, labels: tuple, tol: float = TOL):
    """All graphs ``base + v`` (``v`` joined to at least one vertex) whose graph
    level is ``<= level``, assuming ``base`` has level ``<= level - 1``."""
    for row in _Extender(base, level, labels, tol).rows():
        yield base.extend(row)


@lru_cache(maxsize=None)
def connected_pool(rank: int, level: int, labels: tuple, tol: float = TOL) -> tuple[CoxeterGraph, ...]:
    """Connected graphs of the given rank with graph level ``<= level``, up to isomorphism."""
    if rank == 1:
        return (CoxeterGraph(1),)
    base_level = max(level - 1, 0)
    seen: dict = {}
    for H in connected_pool(rank - 1, base_level, labels, tol):
        for G in extensions(H, level, labels, tol):
            key = canonical_form(G)
            if key not in seen:
                seen[key] = G
    return tuple(seen.values())


def enumerate_corank0(
    rank: int,
    max_level: int,
    label_bound: int | None = None,
    allow_infinity: bool = True,
    strict: bool | None = None,
    tol: float = TOL,
) -> list[CoxeterGraph]:
    """Connected corank-0 graphs of the given rank whose graph level is exactly
    ``max_level`` (``strict`` optionally filters on strictness)."""
    if rank < 1:
        raise ValueError("rank must be positive")
    labels = _labels_for(rank, max_level, label_bound, allow_infinity)
    out = []
    for G in connected_pool(rank, max_level, labels, tol):
        w = np.linalg.eigvalsh(G.gram)
        if np.abs(w).min() <= tol:
            continue
        lev, st = graph_level(G, tol)
        if lev != max_level:
            continue
        if strict is not None and st != strict:
            continue
        out.append(G)
    return out
