"""Face structure of the positive cone, weights, and the level of a root system."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations

import numpy as np
from scipy.optimize import linprog

from .errors import AffineInput, DegenerateForm
from .graph import CoxeterGraph, GraphType, classify_gram
from .quadratic import TOL, canonical_coordinates, signature

LP_TOL = 1e-7
LIGHT_TOL = 1e-6
# relative tolerance for "lies on the supporting hyperplane"
FACE_TOL = 1e-7


class CausalClass(str, Enum):
    SPACE_LIKE = "space-like"
    LIGHT_LIKE = "light-like"
    TIME_LIKE = "time-like"


def causal_class(x, B, tol: float = LIGHT_TOL) -> CausalClass:
    q = float(np.asarray(x) @ np.asarray(B) @ np.asarray(x))
    if q > tol:
        return CausalClass.SPACE_LIKE
    if q < -tol:
        return CausalClass.TIME_LIKE
    return CausalClass.LIGHT_LIKE


@dataclass(frozen=True)
class FacialSubset:
    indices: tuple[int, ...]
    codim: int
    witness: np.ndarray | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class WeightVector:
    vector: np.ndarray = field(compare=False)
    facial: tuple[int, ...]
    causal_class: CausalClass
    norm: float

    def to_json(self) -> dict:
        return {
            "indices": list(self.facial),
            "norm": self.norm,
            "causal_class": self.causal_class.value,
            "vector": self.vector.tolist(),
        }


class RootBasis:
    """Simple roots (rows of ``roots``) in a space with bilinear form ``form``."""

    def __init__(self, form, roots, source_graph: CoxeterGraph | None = None, corank: int = 0,
                 affine: bool = False, tol: float = TOL):
        self.form = np.asarray(form, dtype=float)
        self.roots = np.asarray(roots, dtype=float)
        self.source_graph = source_graph
        self.corank = corank
        self.affine = affine
        self.tol = tol
        self._faces: dict[tuple[int, ...], list[tuple[int, ...]]] = {}

    @property
    def n(self) -> int:
        return self.roots.shape[0]

    @property
    def dim(self) -> int:
        return self.form.shape[0]

    def B(self, x, y) -> float:
        return float(np.asarray(x) @ self.form @ np.asarray(y))

    @cached_property
    def gram(self) -> np.ndarray:
        return self.roots @ self.form @ self.roots.T

    @cached_property
    def signature(self):
        return signature(self.form, self.tol)

    @property
    def is_lorentzian(self) -> bool:
        s = self.signature
        return s.n_zero == 0 and s.n_minus == 1

    @property
    def is_degenerate(self) -> bool:
        return self.signature.n_zero > 0

    def subsystem_type(self, indices) -> GraphType:
        idx = list(indices)
        return classify_gram(self.gram[np.ix_(idx, idx)], self.tol)

    @cached_property
    def direction_of_past(self) -> np.ndarray:
        """``-sum(roots)``, or when that is not time-like (it can be light-like,
        e.g. for the path 3-3-inf), ``-sum(c_s roots_s)`` with ``c`` the
        non-negative eigenvector of the lowest Gram eigenvalue."""
        t = -self.roots.sum(axis=0)
        if t @ self.form @ t < -self.tol:
            return t
        w, V = np.linalg.eigh(self.gram)
        c = np.abs(V[:, 0])
        return -(c @ self.roots)

    # -- faces -----------------------------------------------------------

    def _span_coords(self, idx: tuple[int, ...]):
        X = self.roots[list(idx)]
        if len(idx) == 0:
            return X, 0
        u, s, vt = np.linalg.svd(X, full_matrices=False)
        r = int((s > 1e-9 * max(1.0, s[0])).sum())
        return X @ vt[:r].T, r

    def facets_of(self, idx: tuple[int, ...]) -> list[tuple[int, ...]]:
        """Facets of ``Cone(roots[idx])``, as sorted index tuples.

        Supporting hyperplanes are spanned by ``r - 1`` independent generators
        (``r`` = dimension of the face); a hyperplane supports a facet when all
        generators lie weakly on one side of it.
        """
        idx = tuple(sorted(idx))
        hit = self._faces.get(idx)
        if hit is not None:
            return hit
        Y, r = self._span_coords(idx)
        out: list[tuple[int, ...]] = []
        if r == 1:
            out = [()]
        elif r == len(idx):  # simplicial face
            out = [idx[:k] + idx[k + 1:] for k in range(len(idx))]
            out.sort()
        elif r >= 2:
            norms = np.linalg.norm(Y, axis=1)
            Yn = Y / norms[:, None]
            found = set()
            for comb in combinations(range(len(idx)), r - 1):
                sub = Yn[list(comb)]
                _, s, vt = np.linalg.svd(sub)
                if s[-1] < 1e-9:
                    continue
                nu = vt[-1]
                vals = Yn @ nu
                on = np.abs(vals) <= FACE_TOL
                off = vals[~on]
                if off.size and not (np.all(off > 0) or np.all(off < 0)):
                    continue
                face = tuple(idx[k] for k in np.flatnonzero(on))
                if face not in found:
                    found.add(face)
                    out.append(face)
            out.sort()
        self._faces[idx] = out
        return out

    def rank_of(self, indices) -> int:
        idx = list(indices)
        if not idx:
            return 0
        return int(np.linalg.matrix_rank(self.roots[idx], tol=1e-9))


def root_basis(G: CoxeterGraph, tol: float = TOL) -> RootBasis:
    """Canonical root basis of a Coxeter graph; affine graphs keep the standard basis."""
    try:
        coords = canonical_coordinates(G.gram, tol)
    except AffineInput:
        return RootBasis(G.gram, np.eye(G.n), G, corank=signature(G.gram, tol).n_zero, affine=True, tol=tol)
    return RootBasis(coords.form, coords.roots, G, corank=coords.corank, tol=tol)


def canonicalize(G: CoxeterGraph, tol: float = TOL) -> tuple[RootBasis, int]:
    """Quotient by the radical; raises :class:`AffineInput` for affine graphs."""
    coords = canonical_coordinates(G.gram, tol)
    return RootBasis(coords.form, coords.roots, G, corank=coords.corank, tol=tol), coords.corank


def is_positively_independent(basis: RootBasis, lp_tol: float = LP_TOL) -> bool:
    """Whether some linear functional is strictly positive on every root."""
    n, d = basis.roots.shape
    # max eps s.t. roots @ f >= eps, |f_i| <= 1
    c = np.zeros(d + 1)
    c[-1] = -1.0
    A = np.hstack([-basis.roots, np.ones((n, 1))])
    res = linprog(c, A_ub=A, b_ub=np.zeros(n), bounds=[(-1, 1)] * d + [(None, 1)], method="highs")
    return res.status == 0 and -res.fun > lp_tol


def is_facial(basis: RootBasis, indices, lp_tol: float = LP_TOL) -> FacialSubset | None:
    """Strict-feasibility test for ``Cone(roots[I])`` being a face of the positive cone.

    Maximises the slack ``eps`` subject to ``B(w, a) = 0`` on ``I`` and
    ``B(w, a) >= eps`` off ``I`` with ``w`` in a box.
    """
    I = sorted(set(indices))
    n, d = basis.roots.shape
    off = [j for j in range(n) if j not in I]
    if not off:
        return None
    R = basis.roots @ basis.form  # row j: functional w -> B(a_j, w)
    c = np.zeros(d + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-R[off], np.ones((len(off), 1))])
    A_eq = np.hstack([R[I], np.zeros((len(I), 1))]) if I else None
    res = linprog(
        c,
        A_ub=A_ub,
        b_ub=np.zeros(len(off)),
        A_eq=A_eq,
        b_eq=np.zeros(len(I)) if I else None,
        bounds=[(-1, 1)] * d + [(None, 1)],
        method="highs",
    )
    if res.status != 0 or -res.fun <= lp_tol:
        return None
    return FacialSubset(tuple(I), basis.dim - basis.rank_of(I), res.x[:-1])


def facial_subsets_bruteforce(basis: RootBasis, l: int, lp_tol: float = LP_TOL) -> list[FacialSubset]:
    """All ``l``-facial subsets by testing every subset with the LP; test oracle."""
    if l == 0:
        return [FacialSubset(tuple(range(basis.n)), 0)]
    out = []
    for size in range(basis.n):
        for I in combinations(range(basis.n), size):
            f = is_facial(basis, I, lp_tol)
            if f is not None and f.codim == l:
                out.append(f)
    return out


def facial_subsets(basis: RootBasis, l: int) -> list[FacialSubset]:
    """All ``l``-facial subsets, by descending through facets of facets."""
    if l < 0 or l > basis.dim:
        raise ValueError(f"codimension {l} outside 0..{basis.dim}")
    faces = [tuple(range(basis.n))]
    for _ in range(l):
        nxt = set()
        for F in faces:
            nxt.update(basis.facets_of(F))
        faces = sorted(nxt)
    return [FacialSubset(F, l) for F in faces]


def _weight(basis: RootBasis, I: tuple[int, ...]) -> np.ndarray:
    R = basis.roots @ basis.form
    off = [j for j in range(basis.n) if j not in I]
    if I:
        _, s, vt = np.linalg.svd(R[list(I)])
        w = vt[-1]
    else:  # rank-1 space
        w = np.ones(basis.dim)
    vals = R[off] @ w
    if vals.min() < 0:
        w, vals = -w, -vals
    return w / vals.min()


def weights(basis: RootBasis) -> list[WeightVector]:
    """One weight per facet of the positive cone, normalised so that its minimal
    pairing with the simple roots off the facet equals 1."""
    if basis.is_degenerate:
        raise DegenerateForm("weights need a non-degenerate form")
    out = []
    for f in facial_subsets(basis, 1):
        w = _weight(basis, f.indices)
        q = basis.B(w, w)
        out.append(WeightVector(w, f.indices, causal_class(w, basis.form), q))
    return out


def system_level(basis: RootBasis, max_level: int | None = None) -> tuple[int, bool]:
    """Least ``l`` such that every ``l``-facial subsystem is finite or affine.

    With ``max_level`` the descent stops early and ``(max_level + 1, False)``
    means "level above ``max_level``".
    """
    full = basis.subsystem_type(range(basis.n))
    if basis.affine or full is not GraphType.INDEFINITE:
        return 0, full is GraphType.FINITE
    faces = [tuple(range(basis.n))]
    top = basis.dim if max_level is None else min(basis.dim, max_level)
    for l in range(1, top + 1):
        nxt = set()
        for F in faces:
            nxt.update(basis.facets_of(F))
        faces = sorted(nxt)
        types = [basis.subsystem_type(F) for F in faces]
        if all(t is not GraphType.INDEFINITE for t in types):
            return l, all(t is GraphType.FINITE for t in types)
        # indefinite faces are the only ones worth descending into
        faces = [F for F, t in zip(faces, types) if t is GraphType.INDEFINITE]
    if max_level is not None and max_level < basis.dim:
        return max_level + 1, False
    return basis.dim, True


def level_of_graph(G: CoxeterGraph, max_level: int | None = None, tol: float = TOL) -> tuple[int, bool]:
    """System level of the canonical root basis of ``G``."""
    return system_level(root_basis(G, tol), max_level)


def timelike_level(basis: RootBasis) -> int:
    """``1 +`` the largest codimension of a time-like face (Lorentzian bases)."""
    best = -1
    for l in range(0, basis.dim + 1):
        for f in facial_subsets(basis, l):
            if f.indices and np.linalg.eigvalsh(basis.gram[np.ix_(f.indices, f.indices)])[0] < -basis.tol:
                best = max(best, l)
    return best + 1
