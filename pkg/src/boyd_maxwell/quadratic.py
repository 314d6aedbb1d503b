"""Real symmetric bilinear forms: signature, radical, Lorentz frames, reflections."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AffineInput, IsotropicMirror, NotLorentzian, NotTimelike

TOL = 1e-9


@dataclass(frozen=True)
class Signature:
    n_plus: int
    n_zero: int
    n_minus: int

    def __iter__(self):
        return iter((self.n_plus, self.n_zero, self.n_minus))

    @property
    def dim(self) -> int:
        return self.n_plus + self.n_zero + self.n_minus


def as_form(B) -> np.ndarray:
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1] or B.shape[0] < 1:
        raise ValueError(f"bilinear form must be a non-empty square matrix, got shape {B.shape}")
    if not np.allclose(B, B.T, atol=1e-12, rtol=0):
        raise ValueError("bilinear form must be symmetric")
    return B


def signature(B, tol: float = TOL) -> Signature:
    """Count eigenvalues above ``+tol``, within ``±tol`` and below ``-tol``."""
    w = np.linalg.eigvalsh(as_form(B))
    return Signature(int((w > tol).sum()), int((np.abs(w) <= tol).sum()), int((w < -tol).sum()))


def radical_basis(B, tol: float = TOL) -> list[np.ndarray]:
    """Orthonormal basis (Euclidean sense) of the numerical null space of ``B``."""
    w, q = np.linalg.eigh(as_form(B))
    return [q[:, k].copy() for k in np.flatnonzero(np.abs(w) <= tol)]


def reflect(alpha, x, B, tol: float = TOL) -> np.ndarray:
    """Reflection of ``x`` in the mirror orthogonal to ``alpha``."""
    alpha = np.asarray(alpha, dtype=float)
    x = np.asarray(x, dtype=float)
    B = np.asarray(B, dtype=float)
    aa = alpha @ B @ alpha
    if abs(aa) <= tol:
        raise IsotropicMirror(f"B(alpha, alpha) = {aa:.3g} is numerically zero")
    return x - 2.0 * (alpha @ B @ x) / aa * alpha


@dataclass(frozen=True)
class RootCoordinates:
    """Simple roots expressed in the quotient by the radical.

    ``roots[s] @ form @ roots[t]`` reproduces the original Gram entry.
    The form is diagonal with entries ±1, positives first.
    """

    roots: np.ndarray
    form: np.ndarray
    corank: int

    @property
    def dim(self) -> int:
        return self.form.shape[0]


def quotient_coordinates(gram, tol: float = TOL) -> RootCoordinates:
    """Project the standard basis onto the orthogonal complement of the radical.

    Coordinates are taken along the eigenvectors of the Gram matrix with
    non-zero eigenvalue, rescaled by ``sqrt(|lambda|)`` so that the induced form
    is ``diag(±1)``.
    """
    gram = as_form(gram)
    w, q = np.linalg.eigh(gram)
    keep = np.flatnonzero(np.abs(w) > tol)
    # positives first, each block in decreasing |lambda|
    keep = sorted(keep, key=lambda k: (w[k] < 0, -abs(w[k])))
    roots = q[:, keep] * np.sqrt(np.abs(w[keep]))
    form = np.diag(np.sign(w[keep]))
    return RootCoordinates(roots=roots, form=form, corank=len(w) - len(keep))


def canonical_coordinates(gram, tol: float = TOL) -> RootCoordinates:
    """Like :func:`quotient_coordinates` but refuses affine (PSD, degenerate) input."""
    gram = as_form(gram)
    sig = signature(gram, tol)
    if sig.n_zero > 0 and sig.n_minus == 0:
        raise AffineInput("affine root systems are not reduced by the radical")
    return quotient_coordinates(gram, tol)


@dataclass(frozen=True)
class LorentzFrame:
    """Isometry from V-coordinates to Minkowski coordinates.

    ``transform @ x`` has the form ``(x_1, ..., x_{d-1}; x_d)`` with quadratic form
    ``x_1^2 + ... + x_{d-1}^2 - x_d^2``. The direction of past ``t`` is sent to a
    vector with positive last coordinate.
    """

    transform: np.ndarray
    past_axis_sign: int = 1

    def __call__(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.transform.T

    @property
    def dim(self) -> int:
        return self.transform.shape[0]


def minkowski(dim: int) -> np.ndarray:
    J = np.eye(dim)
    J[-1, -1] = -1.0
    return J


def lorentz_frame(B, t, tol: float = TOL) -> LorentzFrame:
    B = as_form(B)
    t = np.asarray(t, dtype=float)
    n = B.shape[0]
    if tuple(signature(B, tol)) != (n - 1, 0, 1):
        raise NotLorentzian(f"signature {tuple(signature(B, tol))} is not ({n - 1}, 0, 1)")
    if t @ B @ t >= -tol:
        raise NotTimelike("the direction of past must be time-like")
    w, q = np.linalg.eigh(B)
    order = np.argsort(-w)  # negative eigenvalue last
    w, q = w[order], q[:, order]
    T = (q * np.sqrt(np.abs(w))).T
    sign = 1
    if (T @ t)[-1] < 0:
        T[-1] *= -1.0
        sign = -1
    return LorentzFrame(transform=T, past_axis_sign=sign)
