import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boyd_maxwell.errors import AffineInput, IsotropicMirror, NotLorentzian, NotTimelike
from boyd_maxwell.graph import INF, CoxeterGraph
from boyd_maxwell.quadratic import (
    canonical_coordinates,
    lorentz_frame,
    minkowski,
    quotient_coordinates,
    radical_basis,
    reflect,
    signature,
)


def test_signature_of_small_grams():
    assert tuple(signature([[1, -0.5], [-0.5, 1]])) == (2, 0, 0)
    assert tuple(signature([[1, -1], [-1, 1]])) == (1, 1, 0)
    assert tuple(signature([[1, -2], [-2, 1]])) == (1, 0, 1)


def test_signature_rejects_non_symmetric():
    with pytest.raises(ValueError):
        signature([[1, 0], [1, 1]])


def test_radical_of_infinity_edge():
    (v,) = radical_basis([[1, -1], [-1, 1]])
    assert abs(abs(v[0]) - abs(v[1])) < 1e-12
    assert v[0] * v[1] > 0


def test_radical_of_definite_form_is_empty():
    assert radical_basis(np.eye(3)) == []


def test_radical_of_affine_triangle():
    G = CoxeterGraph(3, {(0, 1): 3, (1, 2): 3, (0, 2): 3})
    (v,) = radical_basis(G.gram)
    assert np.allclose(v / v[0], [1, 1, 1])


def test_reflection_basics():
    B = np.diag([1.0, 1.0, -1.0])
    a = np.array([1.0, 0.5, 0.2])
    x = np.array([0.3, -2.0, 1.0])
    assert np.allclose(reflect(a, a, B), -a)
    y = np.array([0.0, 0.0, 1.0])
    z = y - (a @ B @ y) / (a @ B @ a) * a  # orthogonal to a
    assert np.allclose(reflect(a, z, B), z)
    assert np.allclose(reflect(a, reflect(a, x, B), B), x, atol=1e-12)


def test_reflection_in_isotropic_mirror_fails():
    with pytest.raises(IsotropicMirror):
        reflect([1.0, 1.0], [1.0, 0.0], minkowski(2))


def test_quotient_reproduces_gram_of_corank_one_graph():
    # affine A2 glued to a vertex by an infinity edge: corank 1, indefinite
    G = CoxeterGraph(4, {(0, 1): 3, (1, 2): 3, (0, 2): 3, (2, 3): INF})
    coords = quotient_coordinates(G.gram)
    R, F = coords.roots, coords.form
    assert np.allclose(R @ F @ R.T, G.gram, atol=1e-9)
    assert coords.dim == G.n - coords.corank


def test_canonical_coordinates_refuses_affine():
    with pytest.raises(AffineInput):
        canonical_coordinates([[1, -1], [-1, 1]])


def test_frame_of_minkowski_plane_is_identity_up_to_sign():
    F = lorentz_frame(np.diag([1.0, -1.0]), [0.0, 1.0])
    assert np.allclose(np.abs(F.transform), np.eye(2))
    assert F([0.0, 1.0])[-1] > 0


def test_frame_of_337_triangle():
    G = CoxeterGraph(3, {(0, 1): 3, (1, 2): 3, (0, 2): 7})
    B = G.gram
    t = -np.ones(3)  # minus the sum of the simple roots
    F = lorentz_frame(B, t)
    T = F.transform
    # T^{-T} B T^{-1} is the Minkowski form
    Ti = np.linalg.inv(T)
    assert np.allclose(Ti.T @ B @ Ti, minkowski(3), atol=1e-9)
    x = np.array([0.3, -1.2, 2.5])
    y = F(x)
    assert math.isclose(x @ B @ x, y[:-1] @ y[:-1] - y[-1] ** 2, abs_tol=1e-9)


def test_frame_errors():
    with pytest.raises(NotLorentzian):
        lorentz_frame(np.eye(3), [0, 0, 1])
    with pytest.raises(NotTimelike):
        lorentz_frame(minkowski(3), [1.0, 0.0, 0.0])


# -- properties ---------------------------------------------------------------

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


@st.composite
def lorentzian_setup(draw, dim=4):
    x = np.array([draw(finite) for _ in range(dim)])
    a = np.array([draw(finite) for _ in range(dim)])
    return a, x


@settings(max_examples=200, deadline=None)
@given(lorentzian_setup())
def test_reflection_is_an_involutive_isometry(data):
    a, x = data
    B = minkowski(len(a))
    if abs(a @ B @ a) < 1e-3:
        return
    y = reflect(a, x, B)
    assert math.isclose(y @ B @ y, x @ B @ x, rel_tol=1e-9, abs_tol=1e-7)
    assert np.allclose(reflect(a, y, B), x, atol=1e-7)


@settings(max_examples=100, deadline=None)
@given(st.lists(finite, min_size=16, max_size=16))
def test_signature_invariant_under_congruence(entries):
    P = np.array(entries).reshape(4, 4) + 4 * np.eye(4)  # shifted away from singular matrices
    if abs(np.linalg.det(P)) < 1e-2:
        return
    B = np.diag([1.0, 1.0, 0.0, -1.0])
    C = P.T @ B @ P
    C = (C + C.T) / 2
    tol = 1e-9 * max(1.0, np.abs(C).max())
    assert tuple(signature(C, tol)) == (2, 1, 1)
