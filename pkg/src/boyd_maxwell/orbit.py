"""Breadth-first W-orbits of weights and roots, heights, and limit roots.

A weight ``x = w(omega)`` is pushed further by the generator ``s`` only when
``B(x, alpha_s) > tol``: then ``s w`` is longer than ``w``, so every orbit
element is reached once along a length-increasing word. Positive roots grow
the other way, by the generators with ``B(beta, alpha_s) < -tol``.

Heights come from ``h = sum of the weights``: ``B(h, alpha) > 0`` on every
simple root, so positive roots have positive height (the coordinate sum when
the roots form a basis). Weights sit in the dual chamber and pair negatively
with ``h``; their height is ``B(h, -x)``, so that heights grow along both kinds
of orbit.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .cone import CausalClass, RootBasis, weights
from .errors import InsufficientDepth, NotLorentzian
from .quadratic import TOL

QUANTUM = 1e-7


@dataclass(frozen=True)
class OrbitBudget:
    max_word_length: int | None = None
    max_height: float | None = None
    max_elements: int | None = None

    def __post_init__(self):
        if self.max_word_length is None and self.max_height is None and self.max_elements is None:
            raise ValueError("an orbit budget needs at least one finite bound")

    def admits(self, word_length: int, height: float) -> bool:
        if self.max_word_length is not None and word_length > self.max_word_length:
            return False
        return self.max_height is None or height <= self.max_height


@dataclass(frozen=True)
class OrbitElement:
    vector: np.ndarray = field(compare=False)
    word_length: int
    height: float
    seed: int = 0
    # the same vector in extended precision; far orbit elements are nearly
    # light-like and their form values cancel badly in float64
    precise: np.ndarray | None = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        return {"vector": self.vector.tolist(), "word_length": self.word_length, "height": self.height}


def quantize(x, quantum: float = QUANTUM) -> tuple:
    return tuple(np.round(np.asarray(x) / quantum).astype(np.int64).tolist())


def height_functional(basis: RootBasis) -> np.ndarray:
    """Covector ``g`` with ``g @ x`` the height of a root ``x``."""
    if basis.affine or basis.is_degenerate:
        # the roots are the coordinate basis: height is the coordinate sum
        return np.linalg.pinv(basis.roots).sum(axis=1)
    h = np.sum([w.vector for w in weights(basis)], axis=0)
    return basis.form @ h


def _reflect_rows(basis: RootBasis, dtype=float):
    R = basis.roots.astype(dtype)
    F = basis.form.astype(dtype)
    norms = np.einsum("ij,jk,ik->i", R, F, R)
    return R, R @ F, norms


def _bfs(basis: RootBasis, seeds, budget: OrbitBudget, sign: int, g: np.ndarray, tol: float, prune: bool):
    """Shared BFS; ``sign = +1`` for weights, ``-1`` for roots."""
    R, RF, norms = _reflect_rows(basis, np.longdouble)
    g = np.asarray(g, dtype=np.longdouble)
    hsign = -1.0 if sign > 0 else 1.0

    def height(x):
        return float(hsign * (g @ x))

    seen = set()
    frontier = []
    for k, x in enumerate(seeds):
        key = quantize(x)
        if key not in seen:
            seen.add(key)
            frontier.append((np.asarray(x, dtype=np.longdouble), k))
    out: list[OrbitElement] = []
    L = 0
    while frontier:
        for x, k in frontier:
            hx = height(x)
            if budget.admits(L, hx):
                out.append(OrbitElement(x.astype(float), L, hx, k, x))
                if budget.max_elements is not None and len(out) >= budget.max_elements:
                    return out
        if budget.max_word_length is not None and L >= budget.max_word_length:
            break
        nxt = []
        for x, k in frontier:
            vals = RF @ x
            for s in range(basis.n):
                if prune and not sign * vals[s] > tol:
                    continue
                y = x - 2 * vals[s] / norms[s] * R[s]
                key = quantize(y)
                if key in seen:
                    continue
                if prune and budget.max_height is not None and height(y) > budget.max_height:
                    continue  # heights only grow along pruned expansions
                seen.add(key)
                nxt.append((y, k))
        frontier = nxt
        L += 1
    return out


def orbit_weights(basis: RootBasis, budget: OrbitBudget, tol: float = TOL,
                  classes: Iterable[CausalClass] | None = None) -> list[OrbitElement]:
    """Elements of ``W(Delta*)`` within the budget, each once, with minimal word length.

    ``classes`` restricts the seeds to weights of the given causal classes;
    orbits of light-like weights grow fast and are better left out of packings.
    """
    if not basis.is_lorentzian:
        raise NotLorentzian("orbit of weights needs a Lorentzian basis")
    keep = None if classes is None else set(classes)
    seeds = [w.vector for w in weights(basis) if keep is None or w.causal_class in keep]
    return _bfs(basis, seeds, budget, +1, height_functional(basis), tol, prune=True)


def orbit_roots(basis: RootBasis, budget: OrbitBudget, tol: float = TOL) -> list[OrbitElement]:
    """Positive roots within the budget."""
    return _bfs(basis, list(basis.roots), budget, -1, height_functional(basis), tol, prune=True)


def orbit_bruteforce(basis: RootBasis, seeds, max_word_length: int, kind: str = "weights") -> list[OrbitElement]:
    """Test oracle: BFS over every generator with deduplication only.

    For roots, negative roots are dropped (the orbit of the simple roots under
    all generators contains both signs).
    """
    sign = +1 if kind == "weights" else -1
    g = height_functional(basis)
    out = _bfs(basis, seeds, OrbitBudget(max_word_length=max_word_length), sign, g, TOL, prune=False)
    if kind == "roots":
        out = [e for e in out if e.height > 0]
    return out


def write_jsonl(elements: Iterable[OrbitElement], fh) -> int:
    n = 0
    for e in elements:
        fh.write(json.dumps(e.to_json()) + "\n")
        n += 1
    return n


# -- limit roots ------------------------------------------------------------------

@dataclass(frozen=True)
class LimitRootSamples:
    """Roots of height at least ``min_height`` rescaled to height 1.

    ``constant`` is the empirical ``C`` in ``|B(p, p)| <= C / min_height``.
    """

    points: np.ndarray
    heights: np.ndarray
    form_values: np.ndarray
    min_height: float

    @property
    def constant(self) -> float:
        return float(np.abs(self.form_values).max() * self.min_height) if len(self.form_values) else 0.0

    @property
    def median_form_value(self) -> float:
        return float(np.median(np.abs(self.form_values)))


def limit_root_samples(basis: RootBasis, min_height: float, count: int, max_elements: int = 500_000,
                       tol: float = TOL) -> LimitRootSamples:
    """The ``count`` lowest positive roots of height at least ``min_height``,
    rescaled to height 1. Roots are visited in order of height."""
    g = height_functional(basis)
    _, RF, norms = _reflect_rows(basis)
    heap = [(float(g @ a), k, a.copy()) for k, a in enumerate(basis.roots)]
    heapq.heapify(heap)
    seen = {quantize(a) for a in basis.roots}
    tick = len(heap)
    picked, hs = [], []
    while heap and len(picked) < count:
        hx, _, x = heapq.heappop(heap)
        if hx >= min_height:
            picked.append(x / hx)
            hs.append(hx)
        vals = RF @ x
        for s in np.flatnonzero(vals < -tol):
            y = x - 2.0 * vals[s] / norms[s] * basis.roots[s]
            key = quantize(y)
            if key not in seen:
                seen.add(key)
                tick += 1
                heapq.heappush(heap, (float(g @ y), tick, y))
        if len(seen) > max_elements:
            break
    if len(picked) < count:
        raise InsufficientDepth(f"found {len(picked)} roots of height >= {min_height}, wanted {count}")
    P = np.array(picked)
    vals = np.einsum("ij,jk,ik->i", P, basis.form, P)
    return LimitRootSamples(P, np.array(hs), vals, float(min_height))


def reflection_matrices(basis: RootBasis) -> list[np.ndarray]:
    """Matrices acting on column vectors of coordinates."""
    out = []
    for a in basis.roots:
        aa = a @ basis.form @ a
        out.append(np.eye(basis.dim) - 2.0 * np.outer(a, basis.form @ a) / aa)
    return out


def limit_roots_from_words(basis: RootBasis, words, tol: float = 1e-9) -> np.ndarray:
    """Attracting fixed points of the hyperbolic elements among ``words``.

    These are exact limit roots: the eigenvector of an eigenvalue ``> 1`` of a
    Lorentzian isometry is isotropic. Points are rescaled to height 1.
    """
    mats = reflection_matrices(basis)
    g = height_functional(basis)
    out = []
    for word in words:
        M = np.eye(basis.dim)
        for s in word:
            M = mats[s] @ M
        w, V = np.linalg.eig(M)
        k = int(np.argmax(np.abs(w)))
        if abs(w[k]) <= 1 + 1e-6 or abs(w[k].imag) > tol:
            continue
        v = V[:, k].real
        hv = g @ v
        if abs(hv) < 1e-12:
            continue
        out.append(v / hv)
    return np.array(out).reshape(-1, basis.dim)
