"""Iterating the discrete maps and tracking their integrals."""

from pathlib import Path
from typing import Callable, Dict, Tuple

import numpy as np
import pandas as pd

from cosinelaw.models.orbit import Orbit
from cosinelaw.models.tetra_data import PAIR_LABELS
from cosinelaw.tools import tetra_tools, triangle_tools
from cosinelaw.utils.exceptions import DimensionError, DomainError
from cosinelaw.utils.logging_config import setup_logger

logger = setup_logger(__name__)

BOUNDARY_MARGIN = 1e-3
ORBIT_MAPS = ("phi", "hk", "jonas", "psi")


def _hk(x: np.ndarray) -> np.ndarray:
    return triangle_tools._hk_raw(x, triangle_tools.gram_det(x))


def _jonas(x: np.ndarray) -> np.ndarray:
    return -_hk(x)


def _triangle_integrals(x: np.ndarray) -> np.ndarray:
    return triangle_tools.pair_ratios(x)


def _jonas_integrals(x: np.ndarray) -> np.ndarray:
    return np.concatenate(
        [triangle_tools.pair_ratios(x), triangle_tools.jonas_invariants(x)], axis=-1
    )


# map name -> (dimension, step without checks, integrals, integral names)
_MAPS: Dict[str, Tuple[int, Callable, Callable, Tuple[str, ...]]] = {
    "phi": (3, triangle_tools._phi_raw, _triangle_integrals, ("E12", "E13", "E23")),
    "hk": (3, _hk, _triangle_integrals, ("E12", "E13", "E23")),
    "jonas": (
        3,
        _jonas,
        _jonas_integrals,
        ("E12", "E13", "E23", "sin2_l1", "sin2_l2", "sin2_l3"),
    ),
    "psi": (6, tetra_tools._psi_raw, tetra_tools.integrals, ("r1", "r2", "s1", "s2")),
}


def _lookup(map_kind: str):
    if map_kind not in _MAPS:
        raise ValueError(f"unknown map {map_kind!r}; choose from {ORBIT_MAPS}")
    return _MAPS[map_kind]


def _alive(map_kind: str, x: np.ndarray, margin: float) -> np.ndarray:
    ok = np.all(np.isfinite(x), axis=-1) & np.all(np.abs(x) < 1.0 - margin, axis=-1)
    if map_kind == "psi":
        ok &= tetra_tools.is_admissible(np.where(ok[..., None], x, 0.0))
    elif map_kind in ("hk", "jonas"):
        with np.errstate(invalid="ignore"):
            ok &= np.abs(triangle_tools.gram_det(x)) > triangle_tools.SINGULARITY_TOL
    return ok


def run_orbit(
    map_kind: str, x0, steps: int, boundary_margin: float = BOUNDARY_MARGIN
) -> Orbit:
    """Iterate ``map_kind`` from ``x0`` for up to ``steps`` steps.

    The orbit stops early, keeping every iterate computed so far, once an
    iterate comes within ``boundary_margin`` of |x| = 1, stops being finite,
    or (for psi) leaves the admissible domain; ``status`` records why.
    """
    dim, step, integrals, names = _lookup(map_kind)
    x = np.asarray(x0, dtype=float)
    if x.shape != (dim,):
        raise DimensionError(f"{map_kind} orbits need {dim} components, got {x.shape}")
    if not _alive(map_kind, x, 0.0):
        raise DomainError(
            f"starting point is outside the domain of {map_kind}", coordinates=x.tolist()
        )
    points = [x]
    status, stopped_at = "completed", None
    with np.errstate(all="ignore"):
        for n in range(steps):
            if not _alive(map_kind, points[-1], boundary_margin):
                status, stopped_at = "boundary", n
                break
            nxt = step(points[-1])
            if not np.all(np.isfinite(nxt)) or np.any(np.abs(nxt) >= 1.0):
                status, stopped_at = "left domain", n
                break
            points.append(nxt)
    if status != "completed":
        logger.info("%s orbit stopped after %d of %d steps (%s)", map_kind, stopped_at, steps, status)
    traj = np.asarray(points)
    return Orbit(
        map_kind=map_kind,
        points=traj.tolist(),
        invariants=integrals(traj).tolist(),
        invariant_names=list(names),
        requested_steps=steps,
        status=status,
        stopped_at=stopped_at,
    )


def orbit_frame(orbit: Orbit) -> pd.DataFrame:
    """One row per iterate: step, coordinates, integrals (suffix ``_inv``), status."""
    if orbit.map_kind == "psi":
        columns = [f"x{label}" for label in PAIR_LABELS]
    else:
        columns = ["x1", "x2", "x3"]
    df = pd.DataFrame(orbit.points, columns=columns)
    df.insert(0, "step", np.arange(len(df)))
    inv = pd.DataFrame(orbit.invariants, columns=[f"{n}_inv" for n in orbit.invariant_names])
    df = pd.concat([df, inv], axis=1)
    df["status"] = "ok"
    if orbit.status != "completed":
        df.loc[df.index[-1], "status"] = orbit.status
    return df


def write_orbit_csv(orbit: Orbit, path, float_format: str = "%.17g") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    orbit_frame(orbit).to_csv(path, index=False, float_format=float_format)
    logger.info("Wrote %d iterates to %s", orbit.steps + 1, path)
    return path


def batch_orbits(
    map_kind: str, x0, steps: int, boundary_margin: float = BOUNDARY_MARGIN
) -> Tuple[np.ndarray, np.ndarray]:
    """Integral drift and realized length of many orbits at once.

    Drift is measured relative to max(1, |I_0|). Each orbit contributes only
    the iterates before it first comes within ``boundary_margin`` of the
    boundary; its length is the number of steps it took before stopping, so
    a completed orbit has length ``steps``.
    """
    dim, step, integrals, _ = _lookup(map_kind)
    x = np.array(x0, dtype=float)
    if x.ndim != 2 or x.shape[1] != dim:
        raise DimensionError(f"expected a batch of shape (N, {dim}), got {x.shape}")
    start = integrals(x)
    scale = np.maximum(1.0, np.abs(start))
    drift = np.zeros(len(x))
    lengths = np.zeros(len(x), dtype=int)
    alive = _alive(map_kind, x, boundary_margin)
    with np.errstate(all="ignore"):
        for _ in range(steps):
            if not alive.any():
                break
            nxt = step(np.where(alive[:, None], x, 0.0))
            ok = alive & np.all(np.isfinite(nxt), axis=-1) & np.all(np.abs(nxt) < 1.0, axis=-1)
            x = np.where(ok[:, None], nxt, x)
            rel = np.max(np.abs(integrals(x) - start) / scale, axis=-1)
            drift = np.where(ok, np.maximum(drift, rel), drift)
            lengths += ok
            alive = ok & _alive(map_kind, x, boundary_margin)
    return drift, lengths


def batch_drift(
    map_kind: str, x0, steps: int, boundary_margin: float = BOUNDARY_MARGIN
) -> np.ndarray:
    """Integral drift of many orbits at once; see :func:`batch_orbits`."""
    return batch_orbits(map_kind, x0, steps, boundary_margin)[0]
