"""Acceptance criteria 1 to 7.

Each test prints one ``CRITERION n: PASS|FAIL`` line; the lines are repeated
in the terminal summary. Tolerances are the ones stated by the criteria.
"""
import itertools
import random
import time

import numpy as np

from boyd_maxwell.classify import families as fam
from boyd_maxwell.cone import (
    CausalClass,
    RootBasis,
    facial_subsets,
    is_facial,
    level_of_graph,
    root_basis,
    system_level,
    weights,
)
from boyd_maxwell.graph import INF, CoxeterGraph, GraphType, classify_type, corank, graph_level
from boyd_maxwell.orbit import (
    OrbitBudget,
    limit_root_samples,
    limit_roots_from_words,
    orbit_bruteforce,
    orbit_roots,
    orbit_weights,
    quantize,
)
from boyd_maxwell.packing import (
    Relation,
    ball_of_vector,
    classify_product,
    descartes_defect,
    euclidean_product,
    inside_margin,
    normalize,
    pair_relation,
    tangency_graph,
    tangent_quadruples,
    verify_packing,
)
from boyd_maxwell.quadratic import lorentz_frame

TAU = 1e-9
SQUARE_LEVEL2 = CoxeterGraph(4, {(0, 1): 4, (1, 2): 3, (2, 3): 4, (0, 3): INF})
# four mirrors pairwise parallel: the orbit packs circles in Apollonian fashion
APOLLONIAN = CoxeterGraph(4, {e: INF for e in itertools.combinations(range(4), 2)})
CORANK1_FAMILIES = ("prisms", "lightlike", "products", "spacelike", "twofold")


def random_graph(rng, n, labels=(2, 3, 4, 5, 6, INF)):
    edges = {}
    for e in itertools.combinations(range(n), 2):
        lab = rng.choice(labels)
        if lab != 2:
            edges[e] = lab
    return CoxeterGraph(n, edges)


def space_like_orbit(basis, word_length):
    elems = orbit_weights(basis, OrbitBudget(max_word_length=word_length), classes=[CausalClass.SPACE_LIKE])
    return [e for e in elems if e.vector @ basis.form @ e.vector > 1e-6]


def all_members(family, names):
    for name in names:
        for m in family(name).members:
            yield name, m


# -- 1 -------------------------------------------------------------------------

def test_criterion_1_published_counts(family, acceptance):
    published = [
        ("level2", fam.FamilyTag.LEVEL2_CORANK0),
        ("prisms", fam.FamilyTag.PRISM_ORTHO_BASED),
        ("lightlike", fam.FamilyTag.PYR_LIGHT_APEX),
        ("products", fam.FamilyTag.PRODUCT),
        ("spacelike", fam.FamilyTag.PYR_SPACE_APEX),
        ("twofold", fam.FamilyTag.TWO_FOLD_PYR),
    ]
    mismatches, slow = [], []
    for name, tag in published:
        t0 = time.perf_counter()
        f = family(name)
        elapsed = time.perf_counter() - t0
        assert f.tag is tag
        if elapsed > 600:
            slow.append(f"{name} {elapsed:.0f}s")
        for key, (got, want) in f.discrepancies().items():
            mismatches.append(f"{name}.{key} {got} != {want}")
    ok = not mismatches and not slow
    detail = "all published counts reproduced" if ok else "; ".join(mismatches + slow)
    acceptance(1, ok, detail)
    assert ok, detail


# -- 2 -------------------------------------------------------------------------

def test_criterion_2_graph_level_equals_system_level(acceptance):
    rng = random.Random(2024)
    t0 = time.perf_counter()
    sampled, bad = 0, []
    while sampled < 200:
        G = random_graph(rng, rng.randint(4, 8))
        if corank(G) != 0:
            continue
        sampled += 1
        if graph_level(G) != level_of_graph(G):
            bad.append(G)
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 60
    acceptance(2, ok, f"{sampled} graphs, {len(bad)} disagreements, {elapsed:.1f}s")
    assert ok


# -- 3 -------------------------------------------------------------------------

def _level1_invariants(basis):
    ws = weights(basis)
    if any(w.causal_class is CausalClass.SPACE_LIKE for w in ws):
        return "space-like weight"
    V = np.array([w.vector for w in ws])
    P = V @ basis.form @ V.T
    off = P[~np.eye(len(ws), dtype=bool)]
    if off.size and off.max() > TAU:
        return f"B(w_I, w_J) = {off.max():.3g}"
    return None


def _level2_invariants(basis):
    ws = weights(basis)
    space = [w for w in ws if w.causal_class is CausalClass.SPACE_LIKE]
    for w in space:
        if w.norm > 1 + TAU:
            return f"B(w, w) = {w.norm:.12g}"
        sub = RootBasis(basis.form, basis.roots[list(w.facial)])
        if system_level(sub)[0] != 1:
            return f"facet {w.facial} is not of level 1"
    augmented = np.vstack([basis.roots] + [-w.vector / np.sqrt(w.norm) for w in space])
    lev = system_level(RootBasis(basis.form, augmented))[0]
    if lev != 1:
        return f"augmented basis has level {lev}"
    return None


def test_criterion_3_level_invariants(family, acceptance):
    names = ("lanner", "quasi-lanner", "level2") + CORANK1_FAMILIES
    failures, n1, n2 = [], 0, 0
    for name, m in all_members(family, names):
        basis = root_basis(m.graph)
        if m.level == 1:
            n1 += 1
            err = _level1_invariants(basis)
        elif m.level == 2:
            n2 += 1
            err = _level2_invariants(basis)
        else:
            continue
        if err:
            failures.append(f"{name}: {err}")
    ok = not failures and n1 > 0 and n2 > 0
    acceptance(3, ok, f"{n1} level-1 and {n2} level-2 members, {len(failures)} violations")
    assert ok, failures[:5]


# -- 4 -------------------------------------------------------------------------

def selected_level2_systems(family):
    """The lowest-rank member of each branch, in enumeration order, plus a rank-4 graph."""
    picks = [("rank4", SQUARE_LEVEL2)]
    branches = [
        ("prisms", "prism"), ("prisms", "pyramid"), ("lightlike", "one_dim"), ("lightlike", "both"),
        ("products", "product"), ("spacelike", "prism_triangle"), ("spacelike", "prism_rank_ge7"),
        ("twofold", "one_dim"), ("twofold", "both"),
    ]
    for name, branch in branches:
        ms = family(name).select(branch, level=2)
        m = min(ms, key=lambda m: m.graph.n)
        picks.append((f"{name}/{branch}", m.graph))
    return picks


def level3_systems(count=3):
    """The first Lorentzian corank-0 graphs of level >= 3 from a seeded sampler."""
    rng = random.Random(1)
    out = []
    while len(out) < count:
        G = random_graph(rng, 5)
        if not G.is_connected() or corank(G) != 0 or classify_type(G) is not GraphType.INDEFINITE:
            continue
        b = root_basis(G)
        if b.is_lorentzian and system_level(b)[0] >= 3:
            out.append(G)
    return out


def test_criterion_4_packings(family, acceptance):
    lines, ok = [], True
    for label, G in selected_level2_systems(family):
        t0 = time.perf_counter()
        b = root_basis(G)
        assert system_level(b)[0] == 2
        elems = space_like_orbit(b, 8)
        report = verify_packing(elems, b.form, t=b.direction_of_past)
        overlaps = sum(report.histogram.get(r.value, 0) for r in (Relation.OVERLAP, Relation.HEAVY_OVERLAP, Relation.CONTAINED))
        elapsed = time.perf_counter() - t0
        good = report.is_packing and overlaps == 0 and elapsed < 120
        ok &= good
        lines.append(f"{label} rank {G.n}: {report.ball_count} balls, {overlaps} overlapping pairs, {elapsed:.1f}s")
    for G in level3_systems():
        t0 = time.perf_counter()
        b = root_basis(G)
        elems = space_like_orbit(b, 8)
        report = verify_packing(elems, b.form, t=b.direction_of_past)
        heavy = report.histogram.get(Relation.HEAVY_OVERLAP.value, 0) + report.histogram.get(Relation.CONTAINED.value, 0)
        overlap = report.histogram.get(Relation.OVERLAP.value, 0)
        elapsed = time.perf_counter() - t0
        good = overlap > 0 and heavy == 0 and elapsed < 120
        ok &= good
        lines.append(f"level {system_level(b)[0]} {sorted(G.edges.items())}: {overlap} overlapping, "
                     f"{heavy} heavily overlapping pairs, {elapsed:.1f}s")
    acceptance(4, ok, "; ".join(lines))
    assert ok, "\n".join(lines)


# -- 5 -------------------------------------------------------------------------

def test_criterion_5_geometry(acceptance):
    b = root_basis(SQUARE_LEVEL2)
    frame = lorentz_frame(b.form, b.direction_of_past)
    rng = np.random.default_rng(5)

    def sample():
        while True:
            x = rng.normal(size=4)
            if x @ b.form @ x > 1e-3:
                return normalize(x, b.form, frame)

    worst, class_bad, pairs = 0.0, 0, 0
    while pairs < 1000:
        x, y = sample(), sample()
        bx, by = ball_of_vector(x, frame), ball_of_vector(y, frame)
        if bx.is_half_space or by.is_half_space:
            continue
        pairs += 1
        r = pair_relation(x, y, b.form)
        e = euclidean_product(bx, by)
        worst = max(worst, abs(e - r.value) / max(1.0, abs(r.value)))
        edges = (-1 - 1e-6, -1 + 1e-6, 0.0, 1 - 1e-6)
        near_edge = any(abs(r.value - t) < 1e-6 for t in edges)
        if not near_edge and classify_product(e) is not r.relation:
            class_bad += 1

    # SQUARE_LEVEL2 has no mutually tangent quadruples, so Descartes runs on APOLLONIAN
    a = root_basis(APOLLONIAN)
    a_frame = lorentz_frame(a.form, a.direction_of_past)
    elems = space_like_orbit(a, 8)
    balls = [ball_of_vector(e.vector, a_frame) for e in elems]
    quads = tangent_quadruples(tangency_graph(elems, a.form))
    defects = [descartes_defect([balls[i].curvature for i in q]) for q in quads]
    # the clique finder against brute force on a smaller orbit
    small = space_like_orbit(a, 3)
    E = set(tangency_graph(small, a.form))
    brute = [q for q in itertools.combinations(range(len(small)), 4)
             if all(p in E for p in itertools.combinations(q, 2))]
    cliques_ok = brute == tangent_quadruples(sorted(E))
    ok = worst <= 1e-6 and class_bad == 0 and quads and max(defects) <= 1e-6 and cliques_ok
    acceptance(5, ok, f"{pairs} pairs, max deviation {worst:.2e}, {class_bad} class mismatches; "
                      f"{len(quads)} tangent quadruples, max Descartes defect {max(defects, default=0):.2e}")
    assert ok


# -- 6 -------------------------------------------------------------------------

def test_criterion_6_limit_roots(acceptance):
    b = root_basis(SQUARE_LEVEL2)
    # samples are the 50 lowest roots above each height, so they stay close to H
    medians = [limit_root_samples(b, H, 50).median_form_value for H in (10, 20, 40, 80)]
    ratios = [medians[k] / medians[k + 1] for k in range(3)]
    frame = lorentz_frame(b.form, b.direction_of_past)
    rng = np.random.default_rng(6)
    words = [rng.integers(0, b.n, size=20).tolist() for _ in range(300)]
    P = limit_roots_from_words(b, words)
    balls = space_like_orbit(b, 8)
    margin = max(inside_margin(e.vector, p, frame) for e in balls for p in P)
    ok = min(ratios) >= 2 and margin <= 1e-6 and len(P) > 0
    acceptance(6, ok, "median ratios " + ", ".join(f"{r:.2f}" for r in ratios)
               + f"; {len(P)} limit roots vs {len(balls)} balls, max interior margin {margin:.1e}")
    assert ok


# -- 7 -------------------------------------------------------------------------

def test_criterion_7_oracles(family, acceptance):
    systems = [SQUARE_LEVEL2, CoxeterGraph(3, {(0, 1): 3, (1, 2): 3, (0, 2): 7})]
    for name in ("prisms", "products", "twofold"):
        systems.append(min(family(name).select(level=2), key=lambda m: m.graph.n).graph)
    orbit_bad = []
    for G in systems:
        b = root_basis(G)
        for kind in ("roots", "weights"):
            if kind == "roots":
                pruned = orbit_roots(b, OrbitBudget(max_word_length=5))
                seeds = list(b.roots)
            else:
                pruned = orbit_weights(b, OrbitBudget(max_word_length=5))
                seeds = [w.vector for w in weights(b)]
            brute = orbit_bruteforce(b, seeds, 5, kind=kind)
            if {quantize(e.vector) for e in pruned} != {quantize(e.vector) for e in brute}:
                orbit_bad.append((G.n, kind))

    sample = []
    for name in ("level2",) + CORANK1_FAMILIES:
        ms = [m for m in family(name).members if m.graph.n <= 8]
        sample += [m.graph for m in ms[:: max(1, len(ms) // 15)][:15]]
    face_bad = 0
    for G in sample:
        b = root_basis(G)
        by_codim: dict[int, set] = {}
        for size in range(G.n):
            for I in itertools.combinations(range(G.n), size):
                f = is_facial(b, I)
                if f is not None:
                    by_codim.setdefault(f.codim, set()).add(f.indices)
        for l in range(1, b.dim + 1):
            if {f.indices for f in facial_subsets(b, l)} != by_codim.get(l, set()):
                face_bad += 1
                break
    ok = not orbit_bad and face_bad == 0
    acceptance(7, ok, f"orbits on {len(systems)} systems, {len(orbit_bad)} mismatches; "
                      f"face lattices of {len(sample)} bases, {face_bad} mismatches")
    assert ok
