"""The tetrahedral cosine-law map psi from dihedral angles to edge lengths.

A six-vector x holds cosines in the pair order 12, 13, 23, 14, 24, 34. The
cofactors of the angle Gram matrix are evaluated as explicit polynomials so
that psi, its inverse and its Jacobian work on arrays of shape (..., 6).
"""

from itertools import combinations
from typing import Dict, Tuple

import numpy as np

from cosinelaw.models.tetra_data import (
    COMPLEMENT,
    PAIR_INDEX,
    PAIR_LABELS,
    PAIRS,
    LinkTriangle,
    TetraInvariants,
    TwoStageResult,
    complement,
)
from cosinelaw.tools.triangle_tools import phi
from cosinelaw.utils.exceptions import (
    ConsistencyError,
    DegenerateError,
    DimensionError,
    DomainError,
)
from cosinelaw.utils.logging_config import setup_logger

logger = setup_logger(__name__)

ADMISSIBILITY_TOL = 1e-12
DEGENERACY_TOL = 1e-12
TWO_STAGE_TOL = 1e-8
VERTICES = (1, 2, 3, 4)


def _as_sextuple(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 6:
        raise DimensionError(f"expected six cosines, got shape {arr.shape}")
    return arr


def _v(x: np.ndarray, i: int, j: int) -> np.ndarray:
    return x[..., PAIR_INDEX[(i, j)]]


def _others(*idx: int) -> Tuple[int, ...]:
    return tuple(v for v in VERTICES if v not in idx)


def cofactor_diag(x) -> np.ndarray:
    """g_ii = 1 - (x_jk^2 + x_jm^2 + x_km^2) - 2 x_jk x_jm x_km for i = 1..4."""
    x = _as_sextuple(x)
    out = []
    for i in VERTICES:
        j, k, m = _others(i)
        a, b, c = _v(x, j, k), _v(x, j, m), _v(x, k, m)
        out.append(1.0 - (a * a + b * b + c * c) - 2.0 * a * b * c)
    return np.stack(out, axis=-1)


def cofactor_offdiag(x) -> np.ndarray:
    """g_ij = x_ij + x_ik x_jk + x_im x_jm + x_km(x_ik x_jm + x_im x_jk - x_ij x_km), pair order."""
    x = _as_sextuple(x)
    out = []
    for i, j in PAIRS:
        k, m = complement(i, j)
        xij, xkm = _v(x, i, j), _v(x, k, m)
        xik, xjk, xim, xjm = _v(x, i, k), _v(x, j, k), _v(x, i, m), _v(x, j, m)
        out.append(
            xij + xik * xjk + xim * xjm + xkm * (xik * xjm + xim * xjk - xij * xkm)
        )
    return np.stack(out, axis=-1)


def gram_det(x) -> np.ndarray:
    """det G = g_11 - x_12 g_12 - x_13 g_13 - x_14 g_14 (expansion along the first row)."""
    x = _as_sextuple(x)
    g = cofactor_diag(x)
    off = cofactor_offdiag(x)
    return g[..., 0] - sum(
        _v(x, 1, j) * off[..., PAIR_INDEX[(1, j)]] for j in (2, 3, 4)
    )


def is_admissible(x, tol: float = ADMISSIBILITY_TOL) -> np.ndarray:
    """True where the angle Gram matrix is positive definite (all leading minors > tol)."""
    x = _as_sextuple(x)
    inside = np.all(np.abs(x) < 1.0, axis=-1)
    with np.errstate(invalid="ignore"):
        m2 = 1.0 - _v(x, 1, 2) ** 2
        m3 = cofactor_diag(x)[..., 3]
        m4 = gram_det(x)
    return inside & (m2 > tol) & (m3 > tol) & (m4 > tol)


def _psi_raw(x: np.ndarray) -> np.ndarray:
    g = cofactor_diag(x)
    off = cofactor_offdiag(x)
    out = np.empty_like(x)
    for n, (i, j) in enumerate(PAIRS):
        out[..., n] = off[..., n] / np.sqrt(g[..., i - 1] * g[..., j - 1])
    return out


def _check_admissible(x: np.ndarray) -> None:
    if not np.all(np.isfinite(x)) or np.any(np.abs(x) >= 1.0):
        raise DomainError("cosines must lie in (-1, 1)", coordinates=np.ravel(x).tolist())
    g = cofactor_diag(x)
    if np.any(g <= DEGENERACY_TOL):
        raise DegenerateError(f"diagonal cofactor {np.min(g):.3e} at or below threshold")
    if not np.all(is_admissible(x)):
        raise DomainError(
            "angle Gram matrix is not positive definite; no tetrahedron exists",
            coordinates=np.ravel(x).tolist(),
        )


def psi(x) -> np.ndarray:
    """Cosine law of the tetrahedron: y_ij = g_ij / sqrt(g_ii g_jj).

    Raises
    ------
    DomainError
        If the dihedral cosines do not belong to a tetrahedron.
    DegenerateError
        If a diagonal cofactor is at most 1e-12.
    """
    x = _as_sextuple(x)
    _check_admissible(x)
    return _psi_raw(x)


def psi_inv(y) -> np.ndarray:
    """Inverse cosine law, from edge-length cosines back to dihedral cosines.

    The length Gram has the opposite off-diagonal sign, so psi_inv(y) = -psi(-y).
    """
    y = _as_sextuple(y)
    _check_admissible(-y)
    return -_psi_raw(-y)


def integrals(x) -> np.ndarray:
    """Vectorized (r1, r2, s1, s2) relative to the pairing (12, 34)."""
    x = _as_sextuple(x)
    a = 1.0 - x * x
    base = a[..., 0] * a[..., 5]
    root = np.sqrt(base)
    x12, x13, x23, x14, x24, x34 = (x[..., n] for n in range(6))
    return np.stack(
        [
            a[..., 1] * a[..., 4] / base,
            a[..., 2] * a[..., 3] / base,
            (x12 * x34 - x13 * x24) / root,
            (x13 * x24 - x23 * x14) / root,
        ],
        axis=-1,
    )


def tetra_invariants(x) -> TetraInvariants:
    x = _as_sextuple(x)
    if np.any(np.abs(x) >= 1.0):
        raise DomainError("cosines must lie in (-1, 1)", coordinates=x.tolist())
    r1, r2, s1, s2 = (float(v) for v in integrals(x))
    return TetraInvariants(r1=r1, r2=r2, s1=s1, s2=s2)


def sine_law_residuals(x, y=None) -> Tuple[float, float]:
    """Residuals of the two sine-law forms of the tetrahedron.

    The first compares the three ratios sin l_km sin l_ij / (sin a_ij sin a_km)
    with d / gamma and gamma' / d'. The second uses the cross-multiplied form
    (y_ij y_km - y_ik y_jm) = (d / gamma)(x_ij x_km - x_ik x_jm), which stays
    well conditioned when the differences are small.
    """
    x = _as_sextuple(x)
    y = psi(x) if y is None else _as_sextuple(y)
    sx, sy = np.sqrt(1.0 - x * x), np.sqrt(1.0 - y * y)
    if np.min(sx) <= DEGENERACY_TOL or np.min(sy) <= DEGENERACY_TOL:
        raise DegenerateError("a sine of an angle or edge vanishes")
    ratios = np.array([sy[n] * sy[COMPLEMENT[n]] / (sx[n] * sx[COMPLEMENT[n]]) for n in (0, 1, 2)])
    d = float(gram_det(x))
    gamma = float(np.sqrt(np.prod(cofactor_diag(x))))
    d_len = float(gram_det(-y))
    gamma_len = float(np.sqrt(np.prod(cofactor_diag(-y))))
    target, alt = d / gamma, gamma_len / d_len
    first = max(float(np.max(np.abs(ratios - target))), abs(target - alt))

    def cross(v):
        return np.array(
            [
                v[0] * v[5] - v[1] * v[4],
                v[1] * v[4] - v[3] * v[2],
                v[3] * v[2] - v[0] * v[5],
            ]
        )

    second = max(
        float(np.max(np.abs(cross(y) - target * cross(x)))), abs(target - alt)
    )
    return first, second


def link_triangle(x, m: int) -> LinkTriangle:
    """Link triangle Lk(m): the angles x_ij, x_ik, x_jk of the three edges not at m.

    Applying phi gives the planar angles alpha_ij^(m) of the faces at vertex m.
    """
    if m not in VERTICES:
        raise DimensionError(f"vertex must be in 1..4, got {m}")
    x = _as_sextuple(x)
    i, j, k = _others(m)
    triple = np.array([_v(x, i, j), _v(x, i, k), _v(x, j, k)])
    planar = phi(triple)
    return LinkTriangle(
        vertex=m,
        pairs=(f"{i}{j}", f"{i}{k}", f"{j}{k}"),
        planar_cosines=tuple(float(v) for v in planar),
    )


def two_stage_solve(x) -> TwoStageResult:
    """Edge lengths by applying the triangle cosine law twice.

    First the link triangles yield the planar angles; then each face (ijk)
    with planar angles (alpha_ij^(k), alpha_ik^(j), alpha_jk^(i)) yields its
    side lengths. Every edge lies on two faces; the first answer is kept.

    Raises
    ------
    ConsistencyError
        If the two faces disagree on an edge by more than 1e-8.
    """
    x = _as_sextuple(x)
    _check_admissible(x)
    planar: Dict[Tuple[int, Tuple[int, int]], float] = {}
    for m in VERTICES:
        link = link_triangle(x, m)
        for label, value in zip(link.pairs, link.planar_cosines):
            planar[(m, (int(label[0]), int(label[1])))] = value

    routes: Dict[str, list] = {label: [] for label in PAIR_LABELS}
    for i, j, k in combinations(VERTICES, 3):
        face = np.array(
            [planar[(k, (i, j))], planar[(j, (i, k))], planar[(i, (j, k))]]
        )
        lengths = phi(face)
        for (a, b), value in zip(((i, j), (i, k), (j, k)), lengths):
            routes[f"{a}{b}"].append(float(value))

    discrepancy = max(abs(r[0] - r[1]) for r in routes.values())
    if discrepancy > TWO_STAGE_TOL:
        raise ConsistencyError(
            f"faces disagree on an edge length by {discrepancy:.3e}"
        )
    values = tuple(routes[label][0] for label in PAIR_LABELS)
    return TwoStageResult(values=values, discrepancy=discrepancy, routes=routes)


def _p_coeff(y: np.ndarray, i: int, j: int, k: int, m: int) -> float:
    yij, yik, yim, yjk, yjm = (
        _v(y, i, j), _v(y, i, k), _v(y, i, m), _v(y, j, k), _v(y, j, m),
    )
    return (yik * yjm + yim * yjk - yij * yik * yim - yij * yjk * yjm) / (1.0 - yij**2)


def jacobian_psi(x) -> Tuple[np.ndarray, float]:
    """Closed-form Jacobian of psi and its determinant.

    Row (ij) with complement (km) has the prefactor (1 - x_km^2) / sqrt(g_ii g_jj):

    * column (ij): the prefactor,
    * column sharing one index, e.g. (ik): prefactor * y_jk * sqrt(g_kk / g_jj),
    * column (km): prefactor * p * sqrt(g_kk g_mm / (g_ii g_jj)), with
      p = (y_ik y_jm + y_im y_jk - y_ij y_ik y_im - y_ij y_jk y_jm) / (1 - y_ij^2).
    """
    x = _as_sextuple(x)
    _check_admissible(x)
    y = _psi_raw(x)
    g = dict(zip(VERTICES, cofactor_diag(x)))
    J = np.empty((6, 6))
    for r, (i, j) in enumerate(PAIRS):
        k, m = complement(i, j)
        pref = (1.0 - _v(x, k, m) ** 2) / np.sqrt(g[i] * g[j])
        for c, (a, b) in enumerate(PAIRS):
            if c == r:
                J[r, c] = pref
            elif c == COMPLEMENT[r]:
                p = _p_coeff(y, i, j, k, m)
                J[r, c] = pref * p * np.sqrt(g[k] * g[m] / (g[i] * g[j]))
            else:
                shared = ({a, b} & {i, j}).pop()
                u = i if shared == j else j
                w = a if shared == b else b
                J[r, c] = pref * _v(y, u, w) * np.sqrt(g[w] / g[u])
    return J, float(np.linalg.det(J))


def jacobian_det_factorized(x) -> float:
    """(gamma' / d')^5 computed from the length Gram of y = psi(x)."""
    y = psi(x)
    gamma_len = np.sqrt(np.prod(cofactor_diag(-y)))
    return float((gamma_len / gram_det(-y)) ** 5)


def volume_densities(x) -> np.ndarray:
    """((1 - x_ij^2)(1 - x_km^2))^(5/2) for the pairings 12|34, 13|24, 23|14."""
    x = _as_sextuple(x)
    a = 1.0 - x * x
    return np.stack(
        [(a[..., n] * a[..., COMPLEMENT[n]]) ** 2.5 for n in (0, 1, 2)], axis=-1
    )


def ggs_residual(x) -> float:
    """Relative residual of (prod g'_ii)^(3/2) / (prod g_ii)^(3/2) = prod(1 - y^2)^2 / prod(1 - x^2)^2."""
    x = _as_sextuple(x)
    y = psi(x)
    lhs = (np.prod(cofactor_diag(-y)) / np.prod(cofactor_diag(x))) ** 1.5
    rhs = np.prod((1.0 - y * y) ** 2) / np.prod((1.0 - x * x) ** 2)
    return float(abs(lhs - rhs) / abs(rhs))


def schlafli_symmetry_residual(alpha) -> float:
    """Asymmetry of the Hessian d l_km / d alpha_ij of the volume in angle coordinates.

    With x = cos(alpha), H = diag(-1 / sin l)[comp] J[comp, :] diag(-sin alpha).
    """
    alpha = _as_sextuple(alpha)
    x = np.cos(alpha)
    J, _ = jacobian_psi(x)
    y = _psi_raw(x)
    comp = list(COMPLEMENT)
    H = (-1.0 / np.sqrt(1.0 - y[comp] ** 2))[:, None] * J[comp, :] * (-np.sin(alpha))[None, :]
    return float(np.max(np.abs(H - H.T)))
