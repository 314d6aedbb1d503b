"""Coxeter graphs in Vinberg's convention.

An edge label is a plain number:

* ``2``: no edge (orthogonal roots); never stored explicitly,
* an integer ``m >= 3``: solid edge, ``B = -cos(pi/m)``,
* ``INF``: solid edge labelled infinity, ``B = -1``,
* a float ``-c`` with ``c > 1``: dotted edge, ``B = -c``.
"""
from __future__ import annotations

import math
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .errors import CoxSyntaxError, LabelRangeError
from .quadratic import TOL

INF = math.inf


class GraphType(str, Enum):
    FINITE = "finite"
    AFFINE = "affine"
    INDEFINITE = "indefinite"


def check_label(label) -> float | int:
    if label == INF:
        return INF
    if label < 0:
        if -label <= 1:
            raise LabelRangeError(f"dotted label -c needs c > 1, got c = {-label}")
        return float(label)
    if label != int(label) or label < 3:
        raise LabelRangeError(f"solid label must be an integer >= 3 or inf, got {label}")
    return int(label)


def gram_entry(label) -> float:
    if label == 2:
        return 0.0
    if label == INF:
        return -1.0
    if label < 0:
        return float(label)
    return -math.cos(math.pi / label)


def is_dotted(label) -> bool:
    return label != INF and label < 0


class CoxeterGraph:
    """Immutable labelled graph on vertices ``0..n-1``."""

    def __init__(self, n: int, edges: Mapping[tuple[int, int], float] | Iterable = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        items = edges.items() if isinstance(edges, Mapping) else edges
        clean = {}
        for (i, j), label in items:
            if i == j:
                raise ValueError("self-loops are not allowed")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n = {n}")
            if label == 2:
                continue
            clean[(min(i, j), max(i, j))] = check_label(label)
        self.n = n
        self._edges = dict(sorted(clean.items()))

    @classmethod
    def from_label_matrix(cls, M) -> "CoxeterGraph":
        n = len(M)
        return cls(n, {(i, j): M[i][j] for i in range(n) for j in range(i + 1, n) if M[i][j] != 2})

    @property
    def edges(self) -> dict[tuple[int, int], float]:
        return dict(self._edges)

    def label(self, i: int, j: int):
        if i == j:
            raise ValueError("no label on the diagonal")
        return self._edges.get((min(i, j), max(i, j)), 2)

    def label_matrix(self) -> list[list]:
        M = [[1] * self.n for _ in range(self.n)]
        for i in range(self.n):
            for j in range(self.n):
                if i != j:
                    M[i][j] = self.label(i, j)
        return M

    def neighbors(self, v: int) -> list[int]:
        return [u for u in range(self.n) if u != v and self.label(u, v) != 2]

    @cached_property
    def gram(self) -> np.ndarray:
        B = np.eye(self.n)
        for (i, j), label in self._edges.items():
            B[i, j] = B[j, i] = gram_entry(label)
        return B

    def subgraph(self, vertices: Iterable[int]) -> "CoxeterGraph":
        vs = list(vertices)
        pos = {v: k for k, v in enumerate(vs)}
        return CoxeterGraph(
            len(vs),
            {(pos[i], pos[j]): lab for (i, j), lab in self._edges.items() if i in pos and j in pos},
        )

    def delete(self, *vertices: int) -> "CoxeterGraph":
        drop = set(vertices)
        return self.subgraph(v for v in range(self.n) if v not in drop)

    def extend(self, labels: Mapping[int, float] | Iterable[float]) -> "CoxeterGraph":
        """Append a vertex ``n`` joined to existing vertices with the given labels."""
        if not isinstance(labels, Mapping):
            labels = dict(enumerate(labels))
        edges = dict(self._edges)
        for v, lab in labels.items():
            if lab != 2:
                edges[(v, self.n)] = lab
        return CoxeterGraph(self.n + 1, edges)

    def union(self, other: "CoxeterGraph") -> "CoxeterGraph":
        edges = dict(self._edges)
        edges.update({(i + self.n, j + self.n): lab for (i, j), lab in other._edges.items()})
        return CoxeterGraph(self.n + other.n, edges)

    def with_edge(self, i: int, j: int, label) -> "CoxeterGraph":
        edges = dict(self._edges)
        key = (min(i, j), max(i, j))
        edges.pop(key, None)
        if label != 2:
            edges[key] = label
        return CoxeterGraph(self.n, edges)

    def components(self) -> list[list[int]]:
        seen, comps = set(), []
        for s in range(self.n):
            if s in seen:
                continue
            stack, comp = [s], []
            seen.add(s)
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in self.neighbors(v):
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def has_dotted(self) -> bool:
        return any(is_dotted(lab) for lab in self._edges.values())

    def __eq__(self, other):
        return isinstance(other, CoxeterGraph) and self.n == other.n and self._edges == other._edges

    def __hash__(self):
        return hash((self.n, tuple(self._edges.items())))

    def __repr__(self):
        body = ", ".join(f"{i}-{j}:{_fmt(lab)}" for (i, j), lab in self._edges.items())
        return f"CoxeterGraph(n={self.n}, {{{body}}})"


def _fmt(label) -> str:
    if label == INF:
        return "inf"
    if is_dotted(label):
        return repr(float(label))
    return str(label)


def gram_matrix(G: CoxeterGraph) -> np.ndarray:
    return G.gram.copy()


def classify_gram(B: np.ndarray, tol: float = TOL) -> GraphType:
    if B.shape[0] == 0:
        return GraphType.FINITE
    w = np.linalg.eigvalsh(B)
    if w[0] > tol:
        return GraphType.FINITE
    if w[0] >= -tol:
        return GraphType.AFFINE
    return GraphType.INDEFINITE


def classify_type(G: CoxeterGraph, tol: float = TOL) -> GraphType:
    return classify_gram(G.gram, tol)


def corank(G: CoxeterGraph, tol: float = TOL) -> int:
    return int((np.abs(np.linalg.eigvalsh(G.gram)) <= tol).sum())


def subset_types(B: np.ndarray, size: int, tol: float = TOL) -> dict[tuple[int, ...], GraphType]:
    """Classify every principal submatrix of the given size in one batched call."""
    n = B.shape[0]
    subsets = list(combinations(range(n), size))
    if size == 0 or not subsets:
        return {s: GraphType.FINITE for s in subsets}
    idx = np.array(subsets)
    stack = B[idx[:, :, None], idx[:, None, :]]
    low = np.linalg.eigvalsh(stack)[:, 0]
    out = {}
    for s, w in zip(subsets, low):
        out[s] = GraphType.FINITE if w > tol else GraphType.AFFINE if w >= -tol else GraphType.INDEFINITE
    return out


def graph_level(G: CoxeterGraph, tol: float = TOL) -> tuple[int, bool]:
    """Maxwell's level: least ``l`` such that deleting any ``l`` vertices leaves
    a finite or affine graph. Also reports strictness (all remainders finite)."""
    n = G.n
    B = G.gram
    for level in range(n + 1):
        types = subset_types(B, n - level, tol).values()
        if all(t is not GraphType.INDEFINITE for t in types):
            return level, all(t is GraphType.FINITE for t in types)
    return n, True


# -- .cox text format ---------------------------------------------------------

def parse(text: str) -> CoxeterGraph:
    n = None
    edges: dict[tuple[int, int], float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        try:
            if key == "n":
                if len(parts) != 2 or n is not None:
                    raise CoxSyntaxError("expected a single 'n <int>' line", lineno)
                n = int(parts[1])
                if n < 0:
                    raise CoxSyntaxError("vertex count must be non-negative", lineno)
            elif key in ("edge", "dedge"):
                if len(parts) != 4:
                    raise CoxSyntaxError(f"expected '{key} <i> <j> <label>'", lineno)
                i, j = int(parts[1]), int(parts[2])
                if i == j:
                    raise CoxSyntaxError("self-loop", lineno)
                if key == "edge":
                    lab = parts[3].lower()
                    if lab in ("inf", "infinity", "oo"):
                        label = INF
                    else:
                        m = int(lab)
                        if m < 3:
                            raise LabelRangeError(f"line {lineno}: solid label must be >= 3 or inf, got {m}")
                        label = m
                else:
                    c = float(parts[3])
                    if not c > 1 or not math.isfinite(c):
                        raise LabelRangeError(f"line {lineno}: dotted label needs c > 1, got {parts[3]}")
                    label = -c
                key_ij = (min(i, j), max(i, j))
                if key_ij in edges:
                    raise CoxSyntaxError(f"duplicate edge {key_ij}", lineno)
                edges[key_ij] = label
            else:
                raise CoxSyntaxError(f"unknown directive {key!r}", lineno)
        except ValueError as exc:
            raise CoxSyntaxError(str(exc), lineno) from None
    if n is None:
        raise CoxSyntaxError("missing 'n <int>' line")
    for i, j in edges:
        if j >= n:
            raise CoxSyntaxError(f"edge ({i}, {j}) refers to a vertex >= n = {n}")
    return CoxeterGraph(n, edges)


def serialize(G: CoxeterGraph) -> str:
    lines = [f"n {G.n}"]
    for (i, j), label in G.edges.items():
        if label == INF:
            lines.append(f"edge {i} {j} inf")
        elif is_dotted(label):
            lines.append(f"dedge {i} {j} {float(-label)!r}")
        else:
            lines.append(f"edge {i} {j} {label}")
    return "\n".join(lines) + "\n"
