"""Enumeration of level-2 Coxeter polytopes of rank ``d + 2`` (corank 1).

Each enumerator rebuilds its input lists from definitions, generates candidate
graphs, dedupes them up to isomorphism and re-verifies corank and level of
every survivor from scratch. Measured counts sit next to the published ones in
``GraphFamily.counts`` and ``GraphFamily.expected``; a mismatch is reported,
never forced.
"""
from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import product
from pathlib import Path

import numpy as np

from ..cone import level_of_graph, root_basis, facial_subsets
from ..errors import AmbiguousRoot, IncompatibleBases, NoValidRoot, NotCorankOne
from ..graph import INF, CoxeterGraph, GraphType, classify_type, corank, gram_entry, graph_level, is_dotted, serialize
from ..quadratic import TOL
from .corank0 import enumerate_corank0
from .dashed import ResolvedCase, solve_dashed_label
from .isomorphism import IsoIndex, find_isomorphism
from .roles import EXTENSION_LABELS, hinge, ideal_vertices, is_lk, real_vertices, unique_real_extensions

# placeholder for a dashed edge whose value is about to be solved for
_DASHED = -2.0


class FamilyTag(str, Enum):
    LANNER = "Lanner"
    QUASI_LANNER = "QuasiLanner"
    LEVEL2_CORANK0 = "Level2Corank0"
    PRISM_ORTHO_BASED = "PrismOrthoBased"
    PRISM_SPLICED = "PrismSpliced"
    PYR_LIGHT_APEX = "PyrLightApex"
    PYR_SPACE_APEX = "PyrSpaceApex"
    PRODUCT = "Product"
    TWO_FOLD_PYR = "TwoFoldPyr"


class CombinatorialType(str, Enum):
    PRODUCT = "Product"
    PYRAMID = "Pyramid"
    TWO_FOLD_PYRAMID = "TwoFoldPyramid"


# published counts, keyed like GraphFamily.counts
EXPECTED = {
    FamilyTag.LEVEL2_CORANK0: {"total": 326},
    FamilyTag.PRISM_ORTHO_BASED: {"candidates": 655, "pyramid": 129, "prism_level1": 17, "prism_level2": 509},
    FamilyTag.PYR_LIGHT_APEX: {"one_dim": 358, "one_dim_level1": 89, "one_dim_level2": 269, "both_level2": 65},
    FamilyTag.PRODUCT: {"level2": 28},
    FamilyTag.PYR_SPACE_APEX: {"prism_rank_ge7": 18, "prism_triangle": 266, "both_connected": 3},
    FamilyTag.TWO_FOLD_PYR: {"one_dim_candidates": 221, "one_dim_confirmed": 49, "both_level2": 36},
}


@dataclass
class FamilyMember:
    graph: CoxeterGraph
    branch: str
    level: int
    strict: bool
    corank: int
    combinatorial_type: CombinatorialType | None = None

    def to_json(self) -> dict:
        return {
            "branch": self.branch,
            "rank": self.graph.n,
            "corank": self.corank,
            "level": self.level,
            "strict": self.strict,
            "combinatorial_type": self.combinatorial_type.value if self.combinatorial_type else None,
        }


@dataclass
class GraphFamily:
    tag: FamilyTag
    members: list[FamilyMember] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    compare: bool = True  # False for ad hoc enumerations with no published counts

    @property
    def graphs(self) -> list[CoxeterGraph]:
        return [m.graph for m in self.members]

    @property
    def expected(self) -> dict[str, int]:
        return EXPECTED.get(self.tag, {}) if self.compare else {}

    def select(self, branch: str | None = None, level: int | None = None) -> list[FamilyMember]:
        return [
            m for m in self.members
            if (branch is None or m.branch == branch) and (level is None or m.level == level)
        ]

    def discrepancies(self) -> dict[str, tuple[int, int]]:
        """``key -> (measured, published)`` for every mismatching count."""
        return {k: (self.counts.get(k), v) for k, v in self.expected.items() if self.counts.get(k) != v}

    def __len__(self):
        return len(self.members)


# -- shared input lists --------------------------------------------------------

@lru_cache(maxsize=None)
def level2_corank0_graphs() -> tuple[CoxeterGraph, ...]:
    """Connected ``(2, 0)``-graphs of rank 5..11."""
    return tuple(G for r in range(5, 12) for G in enumerate_corank0(r, 2))


@lru_cache(maxsize=None)
def quasi_lanner_graphs() -> tuple[CoxeterGraph, ...]:
    """Connected non-strict ``(1, 0)``-graphs of rank 4..10."""
    return tuple(G for r in range(4, 11) for G in enumerate_corank0(r, 1, strict=False))


@lru_cache(maxsize=None)
def lanner_graphs(ranks: tuple[int, ...] = (4, 5)) -> tuple[CoxeterGraph, ...]:
    return tuple(G for r in ranks for G in enumerate_corank0(r, 1, strict=True))


@lru_cache(maxsize=None)
def lanner_triangles(max_label: int, excluded: tuple[int, ...] = ()) -> tuple[CoxeterGraph, ...]:
    tri = enumerate_corank0(3, 1, label_bound=max_label, allow_infinity=False, strict=True)
    return tuple(G for G in tri if not any(lab in excluded for lab in G.edges.values()))


def corank0_family(tag: FamilyTag) -> GraphFamily:
    if tag is FamilyTag.LEVEL2_CORANK0:
        graphs = level2_corank0_graphs()
    elif tag is FamilyTag.QUASI_LANNER:
        graphs = quasi_lanner_graphs()
    elif tag is FamilyTag.LANNER:
        graphs = lanner_graphs() + lanner_triangles(10, (7, 9))
    else:
        raise ValueError(f"{tag.value} is not a corank-0 family")
    fam = GraphFamily(tag)
    for G in graphs:
        lev, st = graph_level(G)
        fam.members.append(FamilyMember(G, "all", lev, st, 0))
    fam.counts["total"] = len(fam.members)
    return fam


# -- helpers -------------------------------------------------------------------

def _attach(G: CoxeterGraph, row) -> CoxeterGraph:
    return G.extend(dict(enumerate(row)) if not isinstance(row, dict) else row)


def _is_zero(row) -> bool:
    return all(lab == 2 for lab in row)


def _relabel_union(parts) -> CoxeterGraph | None:
    """Union of ``(graph, position map)`` pairs; ``None`` on conflicting labels."""
    n = 1 + max(p for _, pos in parts for p in pos.values())
    edges: dict = {}
    for G, pos in parts:
        for (i, j), lab in G.edges.items():
            key = (min(pos[i], pos[j]), max(pos[i], pos[j]))
            if key in edges and edges[key] != lab:
                return None
            edges[key] = lab
    return CoxeterGraph(n, edges)


def glue_vertex(H1: CoxeterGraph, h1: int, H2: CoxeterGraph, h2: int) -> CoxeterGraph:
    """Identify vertex ``h1`` of ``H1`` with ``h2`` of ``H2``; the merged vertex comes last."""
    o1 = [v for v in range(H1.n) if v != h1]
    o2 = [v for v in range(H2.n) if v != h2]
    n = len(o1) + len(o2) + 1
    pos1 = {v: k for k, v in enumerate(o1)} | {h1: n - 1}
    pos2 = {v: len(o1) + k for k, v in enumerate(o2)} | {h2: n - 1}
    return _relabel_union([(H1, pos1), (H2, pos2)])


def glue_pair(A: CoxeterGraph, pa: tuple[int, int], B: CoxeterGraph, pb: tuple[int, int]) -> CoxeterGraph | None:
    """Identify the ordered pair ``pa`` of ``A`` with ``pb`` of ``B``; ``None`` if the
    edge inside the pair carries different labels."""
    oa = [x for x in range(A.n) if x not in pa]
    ob = [x for x in range(B.n) if x not in pb]
    n = len(oa) + len(ob) + 2
    posA = {x: k for k, x in enumerate(oa)} | {pa[0]: n - 2, pa[1]: n - 1}
    posB = {x: len(oa) + k for k, x in enumerate(ob)} | {pb[0]: n - 2, pb[1]: n - 1}
    return _relabel_union([(A, posA), (B, posB)])


def combinatorial_type(G: CoxeterGraph, tol: float = TOL) -> CombinatorialType:
    """Product, pyramid or two-fold pyramid, from the positive cone.

    A vertex of the polytope that is an apex shows up as a 1-facial subset of
    size ``n - 1`` (a facet of the cone spanned by all roots but one). The
    number of such facets is 0, 1 or 2 for the three types. The same number is
    the count of zero entries in the linear dependency among the roots, which is
    the Gale-diagram reading; both must agree.
    """
    if corank(G, tol) != 1:
        raise NotCorankOne(f"corank {corank(G, tol)} != 1")
    basis = root_basis(G, tol)
    apexes = sum(1 for f in facial_subsets(basis, 1) if len(f.indices) == G.n - 1)
    if apexes != gale_zero_count(G, tol):
        raise ArithmeticError("face-lattice and Gale readings of the combinatorial type disagree")
    try:
        return (CombinatorialType.PRODUCT, CombinatorialType.PYRAMID, CombinatorialType.TWO_FOLD_PYRAMID)[apexes]
    except IndexError:
        raise NotCorankOne(f"{apexes} apex facets; not a polytope with d + 2 facets") from None


def gale_zero_count(G: CoxeterGraph, tol: float = TOL) -> int:
    w, V = np.linalg.eigh(G.gram)
    z = V[:, np.argmin(np.abs(w))]
    z = z / np.abs(z).max()
    return int((np.abs(z) <= 1e-7).sum())


def _verify(G: CoxeterGraph, branch: str) -> FamilyMember:
    lev, st = level_of_graph(G)
    k = corank(G)
    ctype = combinatorial_type(G) if k == 1 and lev <= 2 else None
    return FamilyMember(G, branch, lev, st, k, ctype)


def verify_members(items, threads: int = 1) -> list[FamilyMember]:
    """Re-verify ``(graph, branch)`` pairs from scratch; order preserving."""
    items = list(items)
    if threads <= 1:
        return [_verify(G, b) for G, b in items]
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(lambda gb: _verify(*gb), items))


# -- prisms (one simplex of dimension 1) -----------------------------------------

def truncation_candidates() -> list[tuple[CoxeterGraph, tuple[int, int]]]:
    """``P + u`` with ``u`` joined by a dashed edge to a real vertex of a
    ``(2, 0)``-graph ``P``, up to isomorphism. Returns ``(graph, dashed edge)``."""
    index = IsoIndex()
    for P in level2_corank0_graphs():
        for v in real_vertices(P):
            G = P.extend({v: _DASHED})
            index.add(G, payload=(G, (v, P.n)))
    return list(index.items)


def enumerate_prisms(threads: int = 1) -> GraphFamily:
    fam = GraphFamily(FamilyTag.PRISM_ORTHO_BASED)
    cands = truncation_candidates()
    fam.counts["candidates"] = len(cands)
    solved = []
    for G, edge in cands:
        sol = solve_dashed_label(G, edge)
        solved.append((sol.graph, "pyramid" if sol.case is ResolvedCase.PYRAMID else "prism"))
    fam.members = verify_members(solved, threads)
    fam.counts["pyramid"] = len(fam.select("pyramid"))
    fam.counts["prism_level1"] = len(fam.select("prism", 1))
    fam.counts["prism_level2"] = len(fam.select("prism", 2))
    return fam


def _prism_parts(p: CoxeterGraph) -> tuple[int, int]:
    """``(u, v)`` of an orthogonally based prism graph: the dashed edge ``u - v``
    with ``u`` joined to nothing else."""
    dashed = [e for e, lab in p.edges.items() if is_dotted(lab)]
    if len(dashed) != 1:
        raise IncompatibleBases("an orthogonally based prism has exactly one dashed edge")
    a, b = dashed[0]
    if len(p.neighbors(a)) == 1:
        return a, b
    if len(p.neighbors(b)) == 1:
        return b, a
    raise IncompatibleBases("neither end of the dashed edge is an orthogonal base")


def splice(p1: CoxeterGraph, p2: CoxeterGraph) -> CoxeterGraph | None:
    """Splice two orthogonally based prisms sharing a lateral graph.

    The lateral graphs are identified, the two non-orthogonal bases are kept
    and joined by a dashed edge solved for corank 1. ``None`` when no dashed
    value works.
    """
    u1, v1 = _prism_parts(p1)
    u2, v2 = _prism_parts(p2)
    lat1 = [x for x in range(p1.n) if x not in (u1, v1)]
    lat2 = [x for x in range(p2.n) if x not in (u2, v2)]
    phi = find_isomorphism(p2.subgraph(lat2), p1.subgraph(lat1))
    if phi is None:
        raise IncompatibleBases("the lateral graphs are not isomorphic")
    G1 = p1.subgraph(lat1)
    row1 = {k: p1.label(x, v1) for k, x in enumerate(lat1)}
    row2 = {phi[k]: p2.label(x, v2) for k, x in enumerate(lat2)}
    G = G1.extend(row1).extend({**row2, G1.n: _DASHED})
    try:
        sol = solve_dashed_label(G, (G1.n, G1.n + 1))
    except (NoValidRoot, AmbiguousRoot):
        return None
    return sol.graph


# -- pyramids with a light-like apex ---------------------------------------------

def enumerate_pyramids_lightlike(threads: int = 1) -> GraphFamily:
    fam = GraphFamily(FamilyTag.PYR_LIGHT_APEX)
    index = IsoIndex()
    for H in quasi_lanner_graphs():
        for v in ideal_vertices(H):
            opts = [a for a in EXTENSION_LABELS + (INF,) if is_lk(H.extend({v: a}), 2)]
            for k, a in enumerate(opts):
                for b in opts[k:]:
                    if a == 2 and b == 2:
                        continue
                    index.add(H.extend({v: a}).extend({v: b, H.n: INF}))
    one_dim = [m for m in verify_members(((G, "one_dim") for G in index.items), threads) if m.corank == 1 and m.level <= 2]
    fam.counts["one_dim_candidates"] = len(index)
    fam.counts["one_dim"] = len(one_dim)
    fam.counts["one_dim_level1"] = sum(m.level == 1 for m in one_dim)
    fam.counts["one_dim_level2"] = sum(m.level == 2 for m in one_dim)

    hinged = [(H, h[0]) for H in quasi_lanner_graphs() if (h := hinge(H)) is not None]
    fam.counts["hinge_graphs"] = len(hinged)
    glued = IsoIndex()
    for i in range(len(hinged)):
        for j in range(i, len(hinged)):
            G = glue_vertex(*hinged[i], *hinged[j])
            if corank(G) == 1 and level_of_graph(G, max_level=2)[0] <= 2:
                glued.add(G)
    both = verify_members(((G, "both") for G in glued.items), threads)
    fam.counts["both_level1"] = sum(m.level == 1 for m in both)
    fam.counts["both_level2"] = sum(m.level == 2 for m in both)
    fam.members = one_dim + both
    return fam


# -- products of two simplices of dimension > 1 -----------------------------------

def product_factors() -> tuple[CoxeterGraph, ...]:
    """Lanner graphs of rank 4, 5 and Lanner triangles without labels 7, 9 or >= 11."""
    return lanner_triangles(10, (7, 9)) + lanner_graphs((4, 5))


def cross_rows(E1, n1: int, E2) -> list[list[tuple]]:
    """Cross-edge matrices between factors of sizes ``n1`` and ``n2``: row ``j``
    (joining vertex ``j`` of the second factor to the first) lies in ``E1`` and
    every column lies in ``E2``. The all-2 matrix is skipped."""
    n2 = len(E2[0]) if E2 else 0
    prefixes = [set(c[:k] for c in E2) for k in range(n2 + 1)]
    out, rows = [], [None] * n2

    def dfs(k):
        if k == n2:
            if not all(_is_zero(r) for r in rows):
                out.append(list(rows))
            return
        for r in E1:
            rows[k] = r
            if all(tuple(rows[j][i] for j in range(k + 1)) in prefixes[k + 1] for i in range(n1)):
                dfs(k + 1)
        rows[k] = None

    dfs(0)
    return out


def join_factors(G1: CoxeterGraph, G2: CoxeterGraph, rows) -> CoxeterGraph:
    G = G1.union(G2)
    edges = G.edges
    for j, r in enumerate(rows):
        for i, lab in enumerate(r):
            if lab != 2:
                edges[(i, G1.n + j)] = lab
    return CoxeterGraph(G.n, edges)


def _products() -> tuple[list[CoxeterGraph], list[tuple[int, int]]]:
    """Corank-1 joins of two Lanner factors with level <= 2, up to isomorphism."""
    factors = product_factors()
    E = [unique_real_extensions(H) for H in factors]
    index = IsoIndex()
    for a in range(len(factors)):
        for b in range(a, len(factors)):
            for rows in cross_rows(E[a], factors[a].n, E[b]):
                G = join_factors(factors[a], factors[b], rows)
                if corank(G) != 1 or level_of_graph(G, max_level=2)[0] > 2:
                    continue
                index.add(G, payload=(G, (a, b)))
    return [g for g, _ in index.items], [ab for _, ab in index.items]


@lru_cache(maxsize=None)
def _product_cache():
    return _products()


def enumerate_products(threads: int = 1) -> GraphFamily:
    fam = GraphFamily(FamilyTag.PRODUCT)
    graphs, _ = _product_cache()
    fam.members = verify_members(((G, "product") for G in graphs), threads)
    fam.counts["level1"] = len(fam.select(level=1))
    fam.counts["level2"] = len(fam.select(level=2))
    return fam


# -- pyramids with a space-like apex ----------------------------------------------

def _strict3_with_surreal(G: CoxeterGraph, pair) -> bool:
    if not is_lk(G, 3, 0, strict=True):
        return False
    return all(is_lk(G.delete(x), 2) == (x in pair) for x in range(G.n))


def prism_apex_candidates(H: CoxeterGraph, labels=EXTENSION_LABELS) -> list[CoxeterGraph]:
    """``H + u + v + w`` over a ``(1^s, 0)``-graph ``H``: each of ``u, v, w`` is
    the unique real vertex of its extension, ``v - w`` is dashed so that
    ``H + v + w`` has corank 1, and the ``u``-edges make ``H + u + v`` and
    ``H + u + w`` strict of level 3 with exactly the new pair surreal."""
    E = unique_real_extensions(H)
    m = H.n
    out = []
    for rv in E:
        for rw in E:
            if rv > rw or (_is_zero(rv) and _is_zero(rw)):
                continue
            base = _attach(H, rv).extend({**dict(enumerate(rw)), m: _DASHED})
            try:
                sol = solve_dashed_label(base, (m, m + 1))
            except (NoValidRoot, AmbiguousRoot):
                continue
            if sol.case is not ResolvedCase.PRISM:
                continue
            for ru in E:
                Hu = _attach(H, ru)
                luv = [a for a in labels if _strict3_with_surreal(Hu.extend({**dict(enumerate(rv)), m: a}), (m, m + 1))]
                luw = [a for a in labels if _strict3_with_surreal(Hu.extend({**dict(enumerate(rw)), m: a}), (m, m + 1))]
                for a in luv:
                    for b in luw:
                        G = Hu.extend({**dict(enumerate(rv)), m: a}).extend({**dict(enumerate(rw)), m: b, m + 1: -sol.c})
                        out.append(G)
    return out


def _space_apex_branch(bases, index: IsoIndex):
    for H in bases:
        for G in prism_apex_candidates(H):
            if corank(G) == 1 and G.is_connected() and level_of_graph(G, max_level=2)[0] == 2:
                index.add(G)


def space_apex_over_products() -> list[CoxeterGraph]:
    """Apex ``v`` over a level-1 product ``G1 x G2`` with ``G_i + v`` having ``v``
    as unique real vertex."""
    graphs, pairs = _product_cache()
    factors = product_factors()
    index = IsoIndex()
    for G, (a, b) in zip(graphs, pairs):
        if level_of_graph(G, max_level=1)[0] != 1:
            continue
        n1 = factors[a].n
        for r1 in unique_real_extensions(factors[a]):
            for r2 in unique_real_extensions(factors[b]):
                row = dict(enumerate(r1)) | {n1 + j: lab for j, lab in enumerate(r2)}
                P = G.extend(row)
                if corank(P) == 1 and P.is_connected() and level_of_graph(P, max_level=2)[0] == 2:
                    index.add(P)
    return list(index.items)


def large_label_triangle_check(k_values=range(7, 51), labels=(3, 4, 5, 6)) -> list[tuple]:
    """Graphs over a triangle with a label ``k >= 7`` that reach corank 1.

    The shape is forced: triangle ``a, b, x`` with ``k`` on ``a - b``, and
    ``u, v, w`` each joined to ``x`` only, with solid ``u - v``, ``u - w`` and a
    dashed ``v - w``. The dashed value is solved so that ``H + v + w`` has
    corank 1; the returned list holds label tuples whose full graph then also
    has corank 1 (expected empty).
    """
    # vertex order a, b, x, v, w, u
    combos = np.array(list(product(labels, repeat=7)))  # xa, xb, xv, xw, xu, uv, uw
    cosv = np.vectorize(gram_entry)
    E = cosv(combos.astype(float))
    hits = []
    for k in k_values:
        N = len(combos)
        B = np.tile(np.eye(6), (N, 1, 1))
        ab = gram_entry(k)
        B[:, 0, 1] = B[:, 1, 0] = ab
        for col, (i, j) in enumerate([(2, 0), (2, 1), (2, 3), (2, 4), (2, 5), (5, 3), (5, 4)]):
            B[:, i, j] = B[:, j, i] = E[:, col]
        sub = B[:, :5, :5].copy()

        def det5(c):
            sub[:, 3, 4] = sub[:, 4, 3] = -c
            return np.linalg.det(sub)

        d0, d1, d2 = det5(0.0), det5(1.0), det5(2.0)
        a2 = (d2 - 2 * d1 + d0) / 2
        a1 = d1 - d0 - a2
        disc = a1 * a1 - 4 * a2 * d0
        ok = (disc >= 0) & (np.abs(a2) > 1e-14)
        s = np.sqrt(np.where(ok, disc, 0.0))
        for root in ((-a1 + s) / np.where(ok, 2 * a2, 1.0), (-a1 - s) / np.where(ok, 2 * a2, 1.0)):
            good = ok & (root > 1 + 1e-9)
            if not good.any():
                continue
            Bf = B[good].copy()
            Bf[:, 3, 4] = Bf[:, 4, 3] = -root[good]
            low = np.abs(np.linalg.eigvalsh(Bf)).min(axis=1)
            for idx in np.flatnonzero(good)[low <= TOL]:
                hits.append((k,) + tuple(int(x) for x in combos[idx]))
    return hits


def enumerate_pyramids_spacelike(threads: int = 1, k_values=range(7, 51)) -> GraphFamily:
    fam = GraphFamily(FamilyTag.PYR_SPACE_APEX)
    big, tri = IsoIndex(), IsoIndex()
    _space_apex_branch(lanner_graphs((4, 5)), big)
    _space_apex_branch(lanner_triangles(6), tri)
    both = space_apex_over_products()
    fam.members = (
        verify_members(((G, "prism_rank_ge7") for G in big.items), threads)
        + verify_members(((G, "prism_triangle") for G in tri.items), threads)
        + verify_members(((G, "both") for G in both), threads)
    )
    fam.counts["prism_rank_ge7"] = len(fam.select("prism_rank_ge7", 2))
    fam.counts["prism_triangle"] = len(fam.select("prism_triangle", 2))
    fam.counts["both_connected"] = len(fam.select("both", 2))
    if k_values is not None:
        ks = list(k_values)
        hits = large_label_triangle_check(ks)
        fam.counts["large_label_hits"] = len(hits)
        fam.notes.append(f"triangle label k checked over {ks[0]}..{ks[-1]}: {len(hits)} corank-1 graphs")
    return fam


# -- two-fold pyramids ----------------------------------------------------------

@lru_cache(maxsize=None)
def hinged_level2_graphs() -> tuple[tuple[CoxeterGraph, tuple[int, int]], ...]:
    return tuple((G, h) for G in level2_corank0_graphs() if (h := hinge(G)) is not None)


def _twofold_apex_labels(G: CoxeterGraph, u: int, v: int, labels, allow_isolated: bool):
    m = G.n
    ok = []
    for a, b in product(labels, repeat=2):
        if a == 2 and b == 2 and not allow_isolated:
            continue
        P = G.extend({u: a, v: b})
        if not is_lk(P, 3):
            continue
        if any(is_lk(P.delete(x), 2) for x in range(m) if x not in (u, v)):
            continue
        if classify_type(P.subgraph([u, v, m])) is not GraphType.FINITE:
            continue
        ok.append((a, b))
    return ok


def twofold_candidates(allow_isolated: bool = True, labels=EXTENSION_LABELS) -> tuple[int, list[CoxeterGraph]]:
    """Extensions ``H + w + w'`` of a hinged ``(2, 0)``-graph with hinge ``u + v``:
    ``w, w'`` join ``u, v`` only, ``w - w'`` is labelled infinity. Returns the raw
    count and the candidates up to isomorphism."""
    index = IsoIndex()
    raw = 0
    for G, (u, v) in hinged_level2_graphs():
        m = G.n
        ok = _twofold_apex_labels(G, u, v, labels, allow_isolated)
        for i, (a, b) in enumerate(ok):
            for c, d in ok[i:]:
                Q = G.extend({u: a, v: b}).extend({u: c, v: d, m: INF})
                if not (Q.subgraph([u, m, m + 1]).is_connected() and Q.subgraph([v, m, m + 1]).is_connected()):
                    continue
                raw += 1
                index.add(Q)
    return raw, list(index.items)


def twofold_glued() -> tuple[list[CoxeterGraph], Counter]:
    """Identify the hinges of two hinged ``(2, 0)``-graphs in both orientations.
    Also reports, per unordered pair of graphs, how many non-isomorphic
    identifications give a ``(2, 1)``-graph."""
    hinged = hinged_level2_graphs()
    index = IsoIndex()
    per_pair: Counter = Counter()
    for i in range(len(hinged)):
        for j in range(i, len(hinged)):
            A, pa = hinged[i]
            B, pb = hinged[j]
            for q in (pb, pb[::-1]):
                G = glue_pair(A, pa, B, q)
                if G is None or corank(G) != 1 or level_of_graph(G, max_level=2)[0] != 2:
                    continue
                if index.add(G):
                    per_pair[(i, j)] += 1
    return list(index.items), per_pair


def enumerate_twofold_pyramids(threads: int = 1, allow_isolated: bool = True) -> GraphFamily:
    fam = GraphFamily(FamilyTag.TWO_FOLD_PYR)
    raw, cands = twofold_candidates(allow_isolated)
    one = verify_members(((Q, "one_dim") for Q in cands), threads)
    one = [m for m in one if m.corank == 1 and m.level <= 2]
    glued, per_pair = twofold_glued()
    both = verify_members(((G, "both") for G in glued), threads)
    fam.members = one + both
    fam.counts["hinge_graphs"] = len(hinged_level2_graphs())
    fam.counts["one_dim_raw"] = raw
    fam.counts["one_dim_candidates"] = len(cands)
    fam.counts["one_dim_confirmed"] = sum(m.level == 2 for m in one)
    fam.counts["both_level2"] = len(fam.select("both", 2))
    fam.counts["both_multiple_identifications"] = sum(1 for c in per_pair.values() if c > 1)
    return fam


# -- output --------------------------------------------------------------------

FAMILY_BUILDERS = {
    "level2": lambda threads=1: corank0_family(FamilyTag.LEVEL2_CORANK0),
    "lanner": lambda threads=1: corank0_family(FamilyTag.LANNER),
    "quasi-lanner": lambda threads=1: corank0_family(FamilyTag.QUASI_LANNER),
    "prisms": enumerate_prisms,
    "lightlike": enumerate_pyramids_lightlike,
    "products": enumerate_products,
    "spacelike": enumerate_pyramids_spacelike,
    "twofold": enumerate_twofold_pyramids,
}


def manifest(fam: GraphFamily, files: list[str] | None = None) -> dict:
    graphs = []
    for k, m in enumerate(fam.members):
        entry = m.to_json()
        if files is not None:
            entry["file"] = files[k]
        graphs.append(entry)
    return {
        "family": fam.tag.value,
        "count": len(fam.members),
        "counts": fam.counts,
        "expected": fam.expected,
        "discrepancies": {k: {"measured": a, "published": b} for k, (a, b) in fam.discrepancies().items()},
        "notes": fam.notes,
        "graphs": graphs,
    }


def write_family(fam: GraphFamily, out_dir) -> Path:
    """Write one ``.cox`` file per member and ``manifest.json``; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for k, m in enumerate(fam.members):
        name = f"{fam.tag.value.lower()}_{k:04d}.cox"
        (out / name).write_text(serialize(m.graph))
        files.append(name)
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest(fam, files), indent=2))
    return path
