import pytest
import numpy as np
from numpy.testing import assert_allclose

from cosinelaw.models.tetra_data import COMPLEMENT, PAIR_LABELS, CosSextuple
from cosinelaw.tools.gram_tools import cosine_law_dual, gram_from_cosines
from cosinelaw.tools.numeric_tools import fd_jacobian
from cosinelaw.tools.orbit_tools import run_orbit
from cosinelaw.tools.tetra_tools import (
    cofactor_diag,
    ggs_residual,
    gram_det,
    integrals,
    is_admissible,
    jacobian_det_factorized,
    jacobian_psi,
    link_triangle,
    psi,
    psi_inv,
    schlafli_symmetry_residual,
    sine_law_residuals,
    tetra_invariants,
    two_stage_solve,
    volume_densities,
)
from cosinelaw.tools.triangle_tools import in_tau_star
from cosinelaw.utils.exceptions import DegenerateError, DimensionError, DomainError


def test_psi_examples(symmetric_tetra):
    assert_allclose(psi(np.zeros(6)), np.zeros(6), atol=1e-15)
    assert_allclose(psi(symmetric_tetra), [-0.25] * 6, rtol=0, atol=1e-15)


def test_psi_symmetric_orbit():
    x = np.full(6, -0.5)
    for n in range(1, 21):
        x = psi(x)
        assert_allclose(x, -1.0 / (2 * n + 2), rtol=0, atol=1e-14)


def test_psi_matches_generic_cofactor_law(tetra_points):
    for x in tetra_points[:25]:
        generic = cosine_law_dual(gram_from_cosines("angles", x))
        assert_allclose(psi(x), generic, rtol=0, atol=1e-14)


def test_psi_vectorized(tetra_points):
    batch = psi(tetra_points)
    assert batch.shape == tetra_points.shape
    assert_allclose(batch[3], psi(tetra_points[3]), rtol=0, atol=1e-15)


def test_psi_inv_round_trip(tetra_points):
    y = psi(tetra_points)
    assert_allclose(psi_inv(y), tetra_points, rtol=0, atol=1e-10)


def test_psi_domain_errors():
    with pytest.raises(DomainError):
        psi([1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    # every link triangle exists but the 4x4 Gram has a negative eigenvalue
    with pytest.raises(DomainError):
        psi(np.full(6, 0.4))
    with pytest.raises(DimensionError):
        psi(np.zeros(5))


def test_psi_degenerate_cofactor():
    # the face 123 is flat, so g_44 vanishes exactly
    x = np.array([0.5, 0.5, 0.5, 0.0, 0.0, 0.0])
    with pytest.raises(DegenerateError):
        psi(x)


def test_admissibility(tetra_points, symmetric_tetra):
    assert np.all(is_admissible(tetra_points))
    assert CosSextuple(values=tuple(symmetric_tetra)).is_admissible()
    assert not is_admissible(np.full(6, 0.4))
    assert gram_det(np.zeros(6)) == pytest.approx(1.0)
    assert_allclose(cofactor_diag(symmetric_tetra), [0.5] * 4)


def test_invariant_examples(symmetric_tetra):
    for x in (np.zeros(6), symmetric_tetra):
        inv = tetra_invariants(x)
        assert_allclose(inv.as_array(), [1.0, 1.0, 0.0, 0.0], atol=1e-15)


def test_integrals_conserved(tetra_points):
    before = integrals(tetra_points)
    after = integrals(psi(tetra_points))
    assert_allclose(after, before, rtol=0, atol=1e-11)


def test_integrals_conserved_along_orbit():
    x0 = 5e-5 * np.array([-3.0, -2.5, 2.0, -3.5, 3.0, -2.8])
    orbit = run_orbit("psi", x0, 1000)
    assert orbit.status == "completed"
    assert orbit.steps == 1000
    start = integrals(x0)
    for x in orbit.points:
        assert_allclose(integrals(np.asarray(x)), start, rtol=0, atol=1e-10)


def test_sine_laws(symmetric_tetra, tetra_points):
    assert sine_law_residuals(np.zeros(6)) == (0.0, 0.0)
    first, second = sine_law_residuals(symmetric_tetra)
    assert first <= 1e-13 and second <= 1e-13
    for x in tetra_points[:30]:
        first, second = sine_law_residuals(x, psi(x))
        assert first <= 1e-10
        assert second <= 1e-10


def test_sine_law_ratio_symmetric(symmetric_tetra):
    y = psi(symmetric_tetra)
    ratio = (1.0 - y[0] ** 2) / (1.0 - symmetric_tetra[0] ** 2)
    assert ratio == pytest.approx(1.25)


def test_link_triangle(symmetric_tetra, tetra_points):
    link = link_triangle(np.zeros(6), 4)
    assert link.pairs == ("12", "13", "23")
    assert_allclose(link.planar_cosines, [0.0, 0.0, 0.0], atol=1e-15)

    link = link_triangle(symmetric_tetra, 1)
    assert link.pairs == ("23", "24", "34")
    assert_allclose(link.planar_cosines, [-1.0 / 3.0] * 3, atol=1e-15)

    for x in tetra_points[:20]:
        for m in (1, 2, 3, 4):
            assert in_tau_star(np.array(link_triangle(x, m).planar_cosines))

    with pytest.raises(DimensionError):
        link_triangle(symmetric_tetra, 5)


def test_two_stage_solve(symmetric_tetra, tetra_points):
    result = two_stage_solve(np.zeros(6))
    assert_allclose(result.array, np.zeros(6), atol=1e-15)
    assert result.discrepancy == 0.0

    result = two_stage_solve(symmetric_tetra)
    assert_allclose(result.array, [-0.25] * 6, rtol=0, atol=1e-13)
    assert result.discrepancy <= 1e-13
    assert set(result.routes) == set(PAIR_LABELS)
    assert all(len(r) == 2 for r in result.routes.values())

    for x in tetra_points[:25]:
        assert_allclose(two_stage_solve(x).array, psi(x), rtol=0, atol=1e-10)


def test_jacobian_at_origin():
    J, det = jacobian_psi(np.zeros(6))
    assert_allclose(J, np.eye(6), atol=1e-15)
    assert det == pytest.approx(1.0)


def test_jacobian_symmetric(symmetric_tetra):
    J, det = jacobian_psi(symmetric_tetra)
    assert_allclose(J, fd_jacobian(psi, symmetric_tetra), rtol=0, atol=1e-7)
    assert det == pytest.approx(1.25**5, rel=1e-12)
    assert jacobian_det_factorized(symmetric_tetra) == pytest.approx(1.25**5, rel=1e-12)


def test_jacobian_matches_finite_differences(tetra_points):
    for x in tetra_points[:10]:
        J, _ = jacobian_psi(x)
        assert_allclose(J, fd_jacobian(psi, x), rtol=0, atol=1e-6)


def test_jacobian_determinant_factorization(tetra_points):
    for x in tetra_points[:25]:
        _, det = jacobian_psi(x)
        assert det == pytest.approx(jacobian_det_factorized(x), rel=1e-9)


def test_volume_forms(tetra_points):
    for x in tetra_points[:25]:
        _, det = jacobian_psi(x)
        assert_allclose(
            det * volume_densities(x), volume_densities(psi(x)), rtol=1e-9
        )


def test_volume_densities_pairings():
    x = np.array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
    a = 1.0 - x * x
    expected = [(a[n] * a[COMPLEMENT[n]]) ** 2.5 for n in (0, 1, 2)]
    assert_allclose(volume_densities(x), expected, rtol=1e-15)


def test_ggs_identity(symmetric_tetra, tetra_points):
    assert ggs_residual(np.zeros(6)) == 0.0
    assert ggs_residual(symmetric_tetra) <= 1e-12
    assert max(ggs_residual(x) for x in tetra_points) <= 1e-10


@pytest.mark.parametrize(
    "alpha, tol",
    [(np.full(6, np.pi / 2), 1e-12), (np.full(6, 2 * np.pi / 3), 1e-9)],
)
def test_schlafli_symmetry(alpha, tol):
    assert schlafli_symmetry_residual(alpha) <= tol


def test_schlafli_symmetry_random(tetra_points):
    for x in tetra_points[:20]:
        assert schlafli_symmetry_residual(np.arccos(x)) <= 1e-8


def test_continuous_limit_direction():
    u = np.array([0.3, -0.2, 0.5, 0.1, -0.4, 0.2])
    labels = {label: n for n, label in enumerate(PAIR_LABELS)}

    def v(a, b):
        return u[labels[f"{min(a, b)}{max(a, b)}"]]

    expected = []
    for label in PAIR_LABELS:
        i, j = int(label[0]), int(label[1])
        k, m = (w for w in (1, 2, 3, 4) if w not in (i, j))
        expected.append(v(i, k) * v(j, k) + v(i, m) * v(j, m))
    eps = 1e-4
    assert_allclose((psi(eps * u) - eps * u) / eps**2, expected, rtol=0, atol=1e-3)
