import json

import pytest
import numpy as np
from deepdiff import DeepDiff
from numpy.testing import assert_allclose

from cosinelaw.models.lattice import CubeFaceState, LatticeBoundary, face_keys, normal_axis
from cosinelaw.models.tetra_data import PAIR_LABELS
from cosinelaw.tools.darboux_tools import (
    consistency_4d,
    darboux_step,
    lattice_evolve,
    lattice_residual,
    symmetric_reduction_residual,
)
from cosinelaw.tools.tetra_tools import psi
from cosinelaw.tools.triangle_tools import phi
from cosinelaw.utils.exceptions import DimensionError, DomainError


def _boundary(extent, rng=None, low=-0.1, high=0.0, value=None, ordered=False):
    nx, ny, nz = extent
    shapes = {"xy": (nx, ny), "xz": (nx, nz), "yz": (ny, nz)}
    if ordered:
        shapes.update({"yx": (nx, ny), "zx": (nx, nz), "zy": (ny, nz)})
    planes = {}
    for name, shape in shapes.items():
        if value is not None:
            planes[name] = np.full(shape, value).tolist()
        else:
            planes[name] = rng.uniform(low, high, size=shape).tolist()
    return LatticeBoundary(extent=extent, planes=planes)


def test_darboux_step_symmetric():
    state = CubeFaceState(fields={"12": 0.0, "13": 0.0, "23": 0.0})
    assert darboux_step("symmetric", state).fields == {"12": 0.0, "13": 0.0, "23": 0.0}

    state = CubeFaceState(fields={"12": -0.5, "13": -0.5, "23": -0.5})
    out = darboux_step("symmetric", state)
    assert_allclose(list(out.fields.values()), [-1.0 / 3.0] * 3, atol=1e-15)


def test_darboux_step_is_phi():
    x = np.array([0.1, -0.2, 0.3])
    out = darboux_step(
        "symmetric", CubeFaceState(fields={"12": x[0], "13": x[1], "23": x[2]})
    )
    assert_allclose([out.fields[k] for k in ("12", "13", "23")], phi(x), atol=1e-15)


def test_darboux_step_general_reduces_to_symmetric():
    fields = {"12": 0.1, "13": -0.2, "23": 0.3}
    sym = darboux_step("symmetric", CubeFaceState(fields=fields))
    gen = darboux_step("general", CubeFaceState(variant="general", fields=fields))
    for key, value in sym.fields.items():
        assert gen.fields[key] == pytest.approx(value, abs=1e-14)
        assert gen.fields[key[::-1]] == pytest.approx(value, abs=1e-14)


def test_darboux_step_errors():
    with pytest.raises(DomainError):
        darboux_step("symmetric", CubeFaceState(fields={"12": 0.2, "13": 1.0, "23": 0.1}))
    with pytest.raises(ValueError):
        darboux_step("other", CubeFaceState(fields={"12": 0.0, "13": 0.0, "23": 0.0}))
    with pytest.raises(DimensionError):
        darboux_step("symmetric", CubeFaceState(fields={"12": 0.0, "13": 0.0}))
    with pytest.raises(ValueError):
        CubeFaceState(fields={"11": 0.0})


def test_consistency_examples(symmetric_tetra):
    result = consistency_4d(np.zeros(6))
    assert result.residual == 0.0
    assert all(v == 0.0 for v in result.values.values())

    result = consistency_4d(symmetric_tetra)
    assert result.residual <= 1e-13
    assert_allclose([result.values[k] for k in PAIR_LABELS], [-0.25] * 6, atol=1e-13)
    assert result.psi_residual <= 1e-13


def test_consistency_matches_psi(tetra_points):
    for x in tetra_points[:50]:
        result = consistency_4d(x)
        assert result.residual <= 1e-10
        assert result.psi_residual <= 1e-10
        assert_allclose([result.values[k] for k in PAIR_LABELS], psi(x), atol=1e-10)


def test_consistency_accepts_labels(symmetric_tetra):
    by_label = dict(zip(PAIR_LABELS, symmetric_tetra))
    assert consistency_4d(by_label).values == consistency_4d(symmetric_tetra).values


def test_consistency_strict_and_lax():
    x = np.full(6, 0.4)
    with pytest.raises(DomainError):
        consistency_4d(x)
    with pytest.raises(ValueError):
        consistency_4d(np.zeros(6), mode="loose")
    with pytest.raises(DimensionError):
        consistency_4d(np.zeros(4))


def test_general_consistency(rng):
    for _ in range(20):
        init = {
            f"{i}{j}": rng.uniform(-0.3, 0.3)
            for i in range(1, 5)
            for j in range(1, 5)
            if i != j
        }
        result = consistency_4d(init, variant="general", mode="lax")
        assert result.residual <= 1e-10
        assert len(result.values) == 12


def test_symmetric_reduction(tetra_points):
    for x in tetra_points[:20]:
        assert symmetric_reduction_residual(x) <= 1e-14
        assert consistency_4d(x, variant="general").symmetry_defect <= 1e-14


def test_alt_variant_is_reported():
    result = consistency_4d(np.zeros(6), variant="alt", mode="lax")
    assert result.residual == 0.0
    result = consistency_4d(np.full(6, -0.2), variant="alt", mode="lax")
    assert np.isfinite(result.residual)
    assert result.psi_residual is None


def test_alt_variant_breaks_symmetry(tetra_points):
    results = []
    for x in tetra_points:
        try:
            results.append(consistency_4d(x, variant="alt", mode="lax"))
        except DomainError:
            continue
    assert len(results) >= 50
    # consistent as an ordered system, but symmetric data does not stay symmetric
    assert max(r.residual for r in results) <= 1e-10
    assert max(r.symmetry_defect for r in results) >= 1e-3


def test_lattice_constant_boundaries():
    field = lattice_evolve("symmetric", _boundary((3, 2, 2), value=0.0))
    for arr in field.faces.values():
        assert np.all(arr == 0.0)

    field = lattice_evolve("symmetric", _boundary((1, 1, 1), value=-0.5))
    assert set(field.faces) == set(face_keys("symmetric"))
    for key, arr in field.faces.items():
        assert arr.shape[normal_axis(key)] == 2
        assert_allclose(arr.ravel()[-1], -1.0 / 3.0, atol=1e-15)


def test_lattice_random_boundary(rng):
    field = lattice_evolve("symmetric", _boundary((8, 8, 8), rng))
    assert field.faces["12"].shape == (8, 8, 9)
    assert field.faces["23"].shape == (9, 8, 8)
    assert not any(np.isnan(arr).any() for arr in field.faces.values())
    assert lattice_residual(field) <= 1e-12


@pytest.mark.parametrize("variant", ["symmetric", "general"])
def test_lattice_fill_orders_agree(rng, variant):
    boundary = _boundary((4, 3, 5), rng, ordered=variant != "symmetric")
    orders = ("lexicographic", "colexicographic", "wavefront")
    fields = [lattice_evolve(variant, boundary, order) for order in orders]
    for other in fields[1:]:
        for key, arr in fields[0].faces.items():
            assert_allclose(other.faces[key], arr, rtol=0, atol=1e-15)
    assert lattice_residual(fields[0]) <= 1e-12


def test_lattice_json_round_trip(rng):
    field = lattice_evolve("symmetric", _boundary((3, 3, 3), rng))
    payload = json.loads(json.dumps(field.to_json_dict()))
    assert DeepDiff(payload, field.to_json_dict()) == {}

    rebuilt = LatticeBoundary(extent=tuple(payload["extent"]), planes=payload["planes"])
    again = lattice_evolve("symmetric", rebuilt)
    assert DeepDiff(again.to_json_dict(), payload, significant_digits=15) == {}


@pytest.mark.parametrize("fill_order", ["lexicographic", "wavefront"])
def test_lattice_reports_first_failure(rng, fill_order):
    boundary = _boundary((3, 3, 3), rng)
    boundary.planes["xy"][1][1] = 1.5
    with pytest.raises(DomainError) as err:
        lattice_evolve("symmetric", boundary, fill_order)
    assert err.value.coordinates == [1, 1, 0]


def test_lattice_boundary_validation():
    with pytest.raises(ValueError):
        LatticeBoundary(extent=(2, 2, 2), planes={"xy": [[0.0, 0.0], [0.0, 0.0]]})
    with pytest.raises(ValueError):
        LatticeBoundary(
            extent=(2, 1, 1),
            planes={"xy": [[0.0], [0.0]], "xz": [[0.0], [0.0]], "yz": [[0.0, 0.0]]},
        )
    with pytest.raises(ValueError):
        lattice_evolve("symmetric", _boundary((1, 1, 1), value=0.0), "random")
