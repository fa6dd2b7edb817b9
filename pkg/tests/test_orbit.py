import pytest
import numpy as np
import pandas as pd
from numpy.testing import assert_allclose, assert_array_equal

from cosinelaw.tools.orbit_tools import (
    batch_drift,
    batch_orbits,
    orbit_frame,
    run_orbit,
    write_orbit_csv,
)
from cosinelaw.utils.exceptions import DimensionError, DomainError


@pytest.mark.parametrize(
    "map_kind, dim, expected",
    [
        ("phi", 3, lambda n: -1.0 / (n + 2)),
        ("hk", 3, lambda n: -1.0 / (2 * n + 2)),
        ("psi", 6, lambda n: -1.0 / (2 * n + 2)),
    ],
)
def test_symmetric_orbits(map_kind, dim, expected):
    orbit = run_orbit(map_kind, np.full(dim, -0.5), 20)
    assert orbit.status == "completed"
    assert orbit.steps == 20
    for n, point in enumerate(orbit.points):
        assert_allclose(point, expected(n), rtol=0, atol=1e-14)
    assert orbit.drift() <= 1e-14


def test_orbit_leaves_domain():
    # c -> c / (1 - c): 0.3, 3/7, 3/4, then 3
    orbit = run_orbit("phi", np.full(3, 0.3), 10)
    assert orbit.status == "left domain"
    assert orbit.stopped_at == 2
    assert orbit.steps == 2
    assert orbit.requested_steps == 10
    assert_allclose(orbit.points[-1], [0.75] * 3, atol=1e-15)


def test_orbit_stops_near_boundary():
    orbit = run_orbit("phi", np.full(3, 0.3), 10, boundary_margin=0.5)
    assert orbit.status == "boundary"
    assert orbit.stopped_at == 2
    assert len(orbit.points) == 3


def test_orbit_errors():
    with pytest.raises(DomainError):
        run_orbit("phi", [1.0, 0.0, 0.0], 5)
    with pytest.raises(DomainError):
        run_orbit("psi", np.full(6, 0.4), 5)
    with pytest.raises(DimensionError):
        run_orbit("psi", np.zeros(3), 5)
    with pytest.raises(ValueError):
        run_orbit("tent", np.zeros(3), 5)


def test_jonas_orbit_tracks_side_sines():
    orbit = run_orbit("jonas", [-0.2, -0.3, -0.4], 50)
    assert orbit.invariant_names[-3:] == ["sin2_l1", "sin2_l2", "sin2_l3"]
    assert orbit.drift() <= 1e-10


def test_orbit_frame(tmp_path):
    orbit = run_orbit("hk", np.full(3, -0.5), 3)
    df = orbit_frame(orbit)
    assert list(df.columns) == ["step", "x1", "x2", "x3", "E12_inv", "E13_inv", "E23_inv", "status"]
    assert (df["status"] == "ok").all()

    path = write_orbit_csv(orbit, tmp_path / "out" / "orbit.csv")
    back = pd.read_csv(path)
    assert_allclose(back["x1"], [-1 / 2, -1 / 4, -1 / 6, -1 / 8], rtol=0, atol=1e-15)
    assert list(back["step"]) == [0, 1, 2, 3]


def test_orbit_frame_marks_stop():
    orbit = run_orbit("phi", np.full(3, 0.3), 10)
    df = orbit_frame(orbit)
    assert df["status"].iloc[-1] == "left domain"
    assert (df["status"].iloc[:-1] == "ok").all()

    psi_df = orbit_frame(run_orbit("psi", np.full(6, -0.5), 2))
    assert "x34" in psi_df.columns and "s2_inv" in psi_df.columns


def test_batch_drift(tau_points, tetra_points):
    drift = batch_drift("phi", tau_points[:50], 200, boundary_margin=1e-2)
    assert drift.shape == (50,)
    assert np.max(drift) <= 1e-9
    assert np.max(batch_drift("psi", tetra_points[:20], 100, boundary_margin=1e-2)) <= 1e-9
    with pytest.raises(DimensionError):
        batch_drift("psi", tau_points, 10)


def test_batch_orbits_lengths():
    x0 = np.array([[0.3, 0.3, 0.3], [-0.5, -0.5, -0.5]])
    drift, lengths = batch_orbits("phi", x0, 10)
    assert_array_equal(lengths, [2, 10])
    assert lengths[0] == run_orbit("phi", x0[0], 10).steps
    assert np.max(drift) <= 1e-14
