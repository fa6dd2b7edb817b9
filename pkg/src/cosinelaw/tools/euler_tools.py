"""Continuous limits: the Euler top and the coupled six-variable flow.

Under the scaling x -> eps x the cosine laws become time-eps steps of

    euler3:    dx_i/dt  = x_j x_k,
    coupled6:  dx_ij/dt = x_ik x_jk + x_im x_jm,

and the coupled flow splits into two Euler tops in p = x_ij + x_km and
q = x_ij - x_km.
"""

from typing import Sequence, Tuple, Union

import numpy as np
import pandas as pd

from cosinelaw.models.flow import SYSTEM_DIM, FlowState, LimitOrderResult
from cosinelaw.models.tetra_data import COMPLEMENT, PAIR_INDEX, PAIR_LABELS, PAIRS, complement
from cosinelaw.tools.tetra_tools import psi
from cosinelaw.tools.triangle_tools import phi_eps
from cosinelaw.utils.exceptions import DimensionError
from cosinelaw.utils.logging_config import setup_logger

logger = setup_logger(__name__)

SYSTEMS = tuple(SYSTEM_DIM)
LIMIT_MAPS = ("phi_eps", "psi")
LIMIT_SYSTEM = {"phi_eps": "euler3", "psi": "coupled6"}


def _state(system: str, x: Union[FlowState, Sequence[float], np.ndarray]) -> np.ndarray:
    if system not in SYSTEM_DIM:
        raise ValueError(f"unknown system {system!r}; choose from {SYSTEMS}")
    arr = x.array if isinstance(x, FlowState) else np.asarray(x, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != SYSTEM_DIM[system]:
        raise DimensionError(
            f"{system} expects {SYSTEM_DIM[system]} components, got shape {arr.shape}"
        )
    return arr


def rhs(system: str, x) -> np.ndarray:
    """Vector field of ``system`` at ``x`` (arrays of shape (..., dim))."""
    x = _state(system, x)
    if system == "euler3":
        return np.stack(
            [x[..., 1] * x[..., 2], x[..., 0] * x[..., 2], x[..., 0] * x[..., 1]], axis=-1
        )
    out = np.empty_like(x)
    for n, (i, j) in enumerate(PAIRS):
        k, m = complement(i, j)
        out[..., n] = (
            x[..., PAIR_INDEX[(i, k)]] * x[..., PAIR_INDEX[(j, k)]]
            + x[..., PAIR_INDEX[(i, m)]] * x[..., PAIR_INDEX[(j, m)]]
        )
    return out


def decouple(x) -> Tuple[np.ndarray, np.ndarray]:
    """p_ij = x_ij + x_km and q_ij = x_ij - x_km for ij = 12, 13, 23."""
    x = _state("coupled6", x)
    own, other = x[..., :3], x[..., list(COMPLEMENT[:3])]
    return own + other, own - other


def recouple(p, q) -> np.ndarray:
    """Inverse of :func:`decouple`."""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    own, other = (p + q) / 2.0, (p - q) / 2.0
    x = np.empty(p.shape[:-1] + (6,))
    x[..., :3] = own
    x[..., list(COMPLEMENT[:3])] = other
    return x


def pushforward_residual(x) -> float:
    """max |d(p, q)/dt - (euler3(p), euler3(q))| along the coupled flow."""
    x = _state("coupled6", x)
    dp, dq = decouple(rhs("coupled6", x))
    p, q = decouple(x)
    return float(
        max(np.max(np.abs(dp - rhs("euler3", p))), np.max(np.abs(dq - rhs("euler3", q))))
    )


def integral_names(system: str) -> Tuple[str, ...]:
    if system == "euler3":
        return ("I12", "I13")
    return ("P1", "P2", "Q1", "Q2", "A1", "A2", "B1", "B2")


def integrals_continuous(system: str, x) -> np.ndarray:
    """Quadratic integrals of the flow, in the order of :func:`integral_names`.

    For euler3: I_12 = x_1^2 - x_2^2 and I_13 = x_1^2 - x_3^2.
    For coupled6: the Euler-top integrals of p and of q, the differences
    A of x_ij^2 + x_km^2 between pairings and the differences B of x_ij x_km;
    they satisfy P = A + 2B and Q = A - 2B.
    """
    x = _state(system, x)
    if system == "euler3":
        sq = x * x
        return np.stack([sq[..., 0] - sq[..., 1], sq[..., 0] - sq[..., 2]], axis=-1)
    p, q = decouple(x)
    sq = x * x
    sums = sq[..., :3] + sq[..., list(COMPLEMENT[:3])]
    prods = x[..., :3] * x[..., list(COMPLEMENT[:3])]

    def diffs(v):
        return v[..., 0] - v[..., 1], v[..., 1] - v[..., 2]

    return np.stack(
        [*diffs(p * p), *diffs(q * q), *diffs(sums), *diffs(prods)], axis=-1
    )


def integral_relations_residual(x) -> float:
    """max |P - (A + 2B)| and |Q - (A - 2B)| over both difference indices."""
    P1, P2, Q1, Q2, A1, A2, B1, B2 = np.moveaxis(integrals_continuous("coupled6", x), -1, 0)
    res = [P1 - A1 - 2 * B1, P2 - A2 - 2 * B2, Q1 - A1 + 2 * B1, Q2 - A2 + 2 * B2]
    return float(max(np.max(np.abs(r)) for r in res))


def rk4(system: str, x0, h: float, steps: int) -> np.ndarray:
    """Classical fourth-order Runge-Kutta; returns all steps + 1 states.

    ``x0`` may be a batch of shape (N, dim); the result then has shape
    (steps + 1, N, dim).
    """
    x = _state(system, x0).astype(float, copy=True)
    traj = np.empty((steps + 1,) + x.shape)
    traj[0] = x
    for n in range(steps):
        k1 = rhs(system, x)
        k2 = rhs(system, x + 0.5 * h * k1)
        k3 = rhs(system, x + 0.5 * h * k2)
        k4 = rhs(system, x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        traj[n + 1] = x
    return traj


def trajectory_frame(system: str, traj: np.ndarray, h: float) -> pd.DataFrame:
    """Tabulate a single trajectory with its integrals, one row per step."""
    traj = np.asarray(traj, dtype=float)
    if system == "euler3":
        columns = ["x1", "x2", "x3"]
    else:
        columns = [f"x{label}" for label in PAIR_LABELS]
    df = pd.DataFrame(traj, columns=columns)
    df.insert(0, "t", h * np.arange(len(df)))
    df.insert(0, "step", np.arange(len(df)))
    inv = integrals_continuous(system, traj)
    for n, name in enumerate(integral_names(system)):
        df[f"{name}_inv"] = inv[:, n]
    return df


def scaled_step(map_kind: str, x0, eps: float) -> np.ndarray:
    """One step of the scaled map: phi_eps(x0, eps), or psi(eps x0) / eps."""
    x0 = np.asarray(x0, dtype=float)
    if map_kind == "phi_eps":
        return phi_eps(x0, eps)
    if map_kind == "psi":
        return psi(eps * x0) / eps
    raise ValueError(f"unknown map {map_kind!r}; choose from {LIMIT_MAPS}")


def limit_order(map_kind: str, x0, eps_list: Sequence[float]) -> LimitOrderResult:
    """Order with which one scaled map step matches one RK4 step of size eps.

    The slope of log(defect) against log(eps) is fitted by least squares over
    the non-zero defects. A consistent discretization has slope at least 2;
    a vanishing defect for every eps (e.g. x0 = 0) gives ``inf``.

    Raises
    ------
    DomainError
        If eps x0 leaves the admissible domain.
    """
    if map_kind not in LIMIT_MAPS:
        raise ValueError(f"unknown map {map_kind!r}; choose from {LIMIT_MAPS}")
    eps = np.asarray(list(eps_list), dtype=float)
    if eps.size < 2 or np.any(eps <= 0.0):
        raise ValueError("eps_list needs at least two positive scales")
    system = LIMIT_SYSTEM[map_kind]
    x0 = _state(system, x0)
    defects = np.array(
        [
            np.max(np.abs(scaled_step(map_kind, x0, e) - rk4(system, x0, e, 1)[-1]))
            for e in eps
        ]
    )
    positive = defects > 0.0
    if positive.sum() < 2:
        slope = float("inf")
    else:
        slope = float(np.polyfit(np.log(eps[positive]), np.log(defects[positive]), 1)[0])
    logger.debug("limit order of %s: slope %.3f", map_kind, slope)
    return LimitOrderResult(
        map_kind=map_kind, slope=slope, eps=eps.tolist(), defects=defects.tolist()
    )


def rk4_order(system: str, x0, h_list: Sequence[float], horizon: float) -> float:
    """Observed global order of RK4 against a run at a quarter of the smallest step."""
    x0 = _state(system, x0)
    h_list = sorted(float(h) for h in h_list)
    h_ref = h_list[0] / 4.0
    ref = rk4(system, x0, h_ref, int(round(horizon / h_ref)))[-1]
    errors = [
        np.max(np.abs(rk4(system, x0, h, int(round(horizon / h)))[-1] - ref))
        for h in h_list
    ]
    return float(np.polyfit(np.log(h_list), np.log(errors), 1)[0])
