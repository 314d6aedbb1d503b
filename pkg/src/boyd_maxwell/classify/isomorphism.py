"""Canonical labelling of edge-labelled graphs by colour refinement plus
individualisation. Graphs in scope have at most 13 vertices, so the search
tree is explored without automorphism pruning."""
from __future__ import annotations

from ..graph import INF, CoxeterGraph


def _label_key(label) -> tuple:
    if label == 2:
        return (0, 0.0)
    if label == INF:
        return (2, 0.0)
    if label < 0:
        return (3, round(-float(label), 9))
    return (1, float(label))


def _refine(M, colors):
    n = len(colors)
    while True:
        sig = [
            (colors[v], tuple(sorted((M[v][u], colors[u]) for u in range(n) if u != v and M[v][u] != (0, 0.0))))
            for v in range(n)
        ]
        ranks = {s: k for k, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def canonical_form(G: CoxeterGraph, extra_colors=None) -> tuple:
    """Isomorphism-invariant certificate of ``G``.

    ``extra_colors`` optionally pins vertex classes (e.g. a marked hinge), so
    that only colour-preserving isomorphisms are considered.
    """
    n = G.n
    if n == 0:
        return (0,)
    M = [[_label_key(G.label(i, j)) if i != j else (0, 0.0) for j in range(n)] for i in range(n)]
    init = list(extra_colors) if extra_colors is not None else [0] * n
    colors = _refine(M, init)
    best = None

    def search(colors):
        nonlocal best
        if len(set(colors)) == n:
            order = sorted(range(n), key=lambda v: colors[v])
            cert = tuple(M[order[i]][order[j]] for i in range(n) for j in range(i + 1, n))
            cert = (tuple(sorted(init)) if extra_colors is not None else (), cert)
            if best is None or cert < best:
                best = cert
            return
        # first smallest non-singleton cell
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = min((k, c) for c, k in counts.items() if k > 1)[1]
        for v in [v for v in range(n) if colors[v] == target]:
            trial = [2 * c + 1 for c in colors]
            trial[v] = 2 * target
            search(_refine(M, trial))

    search(colors)
    return (n, best)


def dedupe(graphs, key=canonical_form):
    """Keep the first graph of every isomorphism class, preserving order."""
    seen, out = set(), []
    for G in graphs:
        k = key(G)
        if k not in seen:
            seen.add(k)
            out.append(G)
    return out


def _label_matrix(G: CoxeterGraph):
    n = G.n
    return [[_label_key(G.label(i, j)) if i != j else (0, 0.0) for j in range(n)] for i in range(n)]


def find_isomorphism(A: CoxeterGraph, B: CoxeterGraph, colors_a=None, colors_b=None) -> dict[int, int] | None:
    """A label-preserving bijection ``A -> B`` (respecting optional vertex
    colours), or ``None``. Stops at the first match."""
    if A.n != B.n:
        return None
    n = A.n
    if n == 0:
        return {}
    MA, MB = _label_matrix(A), _label_matrix(B)
    ca = list(colors_a) if colors_a is not None else [0] * n
    cb = list(colors_b) if colors_b is not None else [0] * n
    if sorted(ca) != sorted(cb):
        return None
    # refine both graphs jointly so that colour names are comparable
    M = [row + [(0, 0.0)] * n for row in MA] + [[(0, 0.0)] * n + row for row in MB]
    base = _refine(M, ca + cb)

    def split(colors):
        return colors[:n], colors[n:]

    def search(colors):
        left, right = split(colors)
        if sorted(left) != sorted(right):
            return None
        if len(set(left)) == n:
            pos = {c: v for v, c in enumerate(right)}
            phi = {v: pos[left[v]] for v in range(n)}
            if all(MA[i][j] == MB[phi[i]][phi[j]] for i in range(n) for j in range(i + 1, n)):
                return phi
            return None
        counts: dict[int, int] = {}
        for c in left:
            counts[c] = counts.get(c, 0) + 1
        target = min((k, c) for c, k in counts.items() if k > 1)[1]
        v = next(x for x in range(n) if left[x] == target)
        for w in [x for x in range(n) if right[x] == target]:
            trial = [2 * c + 1 for c in colors]
            trial[v] = 2 * target
            trial[n + w] = 2 * target
            hit = search(_refine(M, trial))
            if hit is not None:
                return hit
        return None

    return search(base)


def graph_invariant(G: CoxeterGraph, colors=None) -> tuple:
    """Cheap isomorphism invariant: refined colour histogram plus the rounded
    spectrum of the Gram matrix."""
    import numpy as np

    M = _label_matrix(G)
    init = list(colors) if colors is not None else [0] * G.n
    refined = _refine(M, init) if G.n else []
    sig = sorted(
        (init[v], tuple(sorted(M[v][u] for u in range(G.n) if u != v and M[v][u] != (0, 0.0)))) for v in range(G.n)
    )
    hist = tuple(sorted(refined.count(c) for c in set(refined)))
    spectrum = tuple(np.round(np.linalg.eigvalsh(G.gram), 7) + 0.0) if G.n else ()
    return (G.n, tuple(sorted(init)), tuple(sig), hist, spectrum)


class IsoIndex:
    """Insert-or-check store of graphs up to (coloured) isomorphism."""

    def __init__(self):
        self._buckets: dict[tuple, list] = {}
        self.items: list = []

    def add(self, G: CoxeterGraph, colors=None, payload=None) -> bool:
        """Store ``G``; return ``False`` if an isomorphic graph is already present."""
        key = graph_invariant(G, colors)
        bucket = self._buckets.setdefault(key, [])
        for H, hc in bucket:
            if find_isomorphism(G, H, colors, hc) is not None:
                return False
        bucket.append((G, colors))
        self.items.append(G if payload is None else payload)
        return True

    def __len__(self):
        return len(self.items)
