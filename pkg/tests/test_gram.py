import pytest
import numpy as np
from numpy.testing import assert_allclose
from pydantic import ValidationError

from cosinelaw.models.gram import GramMatrix
from cosinelaw.tools.gram_tools import (
    cofactors,
    cosine_law_dual,
    determinant,
    dual_gram,
    duality_residual,
    gram_from_cosines,
    is_positive_definite,
    realize_vertices,
)
from cosinelaw.tools.tetra_tools import psi
from cosinelaw.tools.triangle_tools import phi
from cosinelaw.utils.exceptions import DegenerateError, DimensionError, DomainError


def test_gram_from_cosines_right_angled():
    G = gram_from_cosines("angles", [0.0, 0.0, 0.0])
    assert G.valid
    assert_allclose(G.array, np.eye(3))


def test_gram_from_cosines_symmetric_triangle():
    G = gram_from_cosines("angles", [-0.5, -0.5, -0.5])
    assert G.valid
    assert G.array[0, 1] == 0.5
    assert_allclose(np.sort(np.linalg.eigvalsh(G.array)), [0.5, 0.5, 2.0], atol=1e-14)


def test_gram_from_cosines_degenerate_tetra():
    G = gram_from_cosines("angles", [1.0 / 3.0] * 6)
    assert not G.valid
    assert abs(determinant(G.array)) < 1e-14


def test_gram_from_cosines_lengths_sign():
    G = gram_from_cosines("lengths", [0.25, 0.5, -0.1])
    assert G.array[0, 1] == 0.25
    assert G.array[1, 2] == -0.1


def test_gram_from_cosines_rejects_bad_input():
    with pytest.raises(DimensionError):
        gram_from_cosines("angles", [0.1, 0.2])
    with pytest.raises(DomainError):
        gram_from_cosines("angles", [1.5, 0.0, 0.0])


def test_gram_from_cosines_unit_cosine_is_degenerate():
    G = gram_from_cosines("angles", [1.0, 0.0, 0.0])
    assert not G.valid
    with pytest.raises(DegenerateError):
        cosine_law_dual(G)


def test_gram_matrix_model_validation():
    with pytest.raises(ValidationError):
        GramMatrix(n=3, kind="angles", entries=[[1, 0.1, 0], [0.2, 1, 0], [0, 0, 1]])
    with pytest.raises(ValidationError):
        GramMatrix(n=3, kind="angles", entries=[[2, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_cofactors_identity():
    bundle = cofactors(gram_from_cosines("angles", [0.0, 0.0, 0.0]))
    assert_allclose(bundle.array, np.eye(3))
    assert bundle.det == 1.0


def test_cofactors_symmetric_hand_expansion():
    bundle = cofactors(gram_from_cosines("angles", [-0.5, -0.5, -0.5]))
    cof = bundle.array
    assert_allclose(np.diag(cof), [0.75] * 3, atol=1e-15)
    assert_allclose(cof[~np.eye(3, dtype=bool)], -0.25, atol=1e-15)
    assert_allclose(bundle.det, 0.5, atol=1e-15)


def test_cofactors_match_lu_adjugate(tetra_points):
    for x in tetra_points[:20]:
        G = gram_from_cosines("angles", x)
        bundle = cofactors(G)
        adj = np.linalg.inv(G.array) * np.linalg.det(G.array)
        assert np.max(np.abs(bundle.array.T - adj)) <= 1e-11
        # G adj(G) = d I
        residual = G.array @ bundle.array.T - bundle.det * np.eye(4)
        assert np.max(np.abs(residual)) <= 1e-12 * np.max(np.abs(bundle.array))


def test_cosine_law_dual_examples():
    assert_allclose(cosine_law_dual(gram_from_cosines("angles", [0, 0, 0])), [0, 0, 0])
    assert_allclose(
        cosine_law_dual(gram_from_cosines("angles", [-0.5] * 3)), [-1.0 / 3.0] * 3, atol=1e-15
    )
    assert_allclose(
        cosine_law_dual(gram_from_cosines("angles", [-0.5] * 6)), [-0.25] * 6, atol=1e-15
    )


def test_cosine_law_dual_agrees_with_phi_and_psi(tau_points, tetra_points):
    for x in tau_points[:50]:
        assert_allclose(cosine_law_dual(gram_from_cosines("angles", x)), phi(x), rtol=0, atol=1e-13)
    for x in tetra_points[:50]:
        assert_allclose(cosine_law_dual(gram_from_cosines("angles", x)), psi(x), rtol=0, atol=1e-13)


def test_cosine_law_dual_round_trip(tau_points, tetra_points):
    for x in list(tau_points[:30]) + list(tetra_points[:30]):
        G = gram_from_cosines("angles", x)
        lengths = dual_gram(G)
        assert lengths.kind == "lengths" and lengths.valid
        assert_allclose(cosine_law_dual(lengths), x, rtol=0, atol=1e-10)


def test_cosine_law_dual_degenerate():
    G = GramMatrix(n=3, kind="angles", entries=[[1, -1, 0], [-1, 1, 0], [0, 0, 1]])
    with pytest.raises(DegenerateError):
        cosine_law_dual(G)


def test_duality_residual_examples():
    eye = gram_from_cosines("angles", [0, 0, 0])
    assert duality_residual(eye, gram_from_cosines("lengths", [0, 0, 0])) == 0.0
    G = gram_from_cosines("angles", [-0.5] * 3)
    assert duality_residual(G, gram_from_cosines("lengths", [-1.0 / 3.0] * 3)) <= 1e-13


def test_duality_residual_random(tetra_points):
    for x in tetra_points:
        G = gram_from_cosines("angles", x)
        assert duality_residual(G, dual_gram(G)) <= 1e-10


def test_duality_residual_requires_opposite_kinds():
    G = gram_from_cosines("angles", [0.1, 0.2, 0.3])
    with pytest.raises(DomainError):
        duality_residual(G, G)


def test_realize_vertices_identity():
    r = realize_vertices(gram_from_cosines("lengths", [0, 0, 0]))
    assert_allclose(r.vertices, np.eye(3))
    assert_allclose(r.polar_vertices, np.eye(3))
    assert_allclose(r.D, np.eye(3))


def test_realize_vertices_symmetric_triangle():
    Gp = gram_from_cosines("lengths", [-1.0 / 3.0] * 3)
    r = realize_vertices(Gp)
    V, W = r.vertices, r.polar_vertices
    assert_allclose(V.T @ V, Gp.array, rtol=0, atol=1e-14)
    # the polar Gram is the angle Gram of the triangle with angle cosines -1/2
    assert_allclose(W.T @ W, gram_from_cosines("angles", [-0.5] * 3).array, rtol=0, atol=1e-12)
    VW = V.T @ W
    assert_allclose(VW, np.diag(np.diag(VW)), rtol=0, atol=1e-12)
    assert np.all(np.diag(VW) > 0)


def test_realize_vertices_degenerate():
    with pytest.raises(DegenerateError):
        realize_vertices(gram_from_cosines("angles", [1.0 / 3.0] * 6))


def test_is_positive_definite():
    assert is_positive_definite(np.eye(4))
    assert not is_positive_definite(np.array([[1.0, 2.0], [2.0, 1.0]]))
