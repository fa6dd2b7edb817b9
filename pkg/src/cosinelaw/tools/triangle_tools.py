"""The triangle cosine-law map phi and the maps built from it.

Points are cosine triples x = (x_1, x_2, x_3), read as (x_12, x_13, x_23) in
lattice language. Every map here works on arrays of shape (..., 3) so that
whole batches of orbits can be iterated at once.
"""

import warnings
from typing import Tuple

import numpy as np

from cosinelaw.models.triangle_data import (
    PoissonCoeffs,
    TriangleData,
    TriangleInvariants,
)
from cosinelaw.utils.exceptions import (
    ConsistencyError,
    DimensionError,
    DomainError,
    DomainWarning,
    ExistenceError,
    SingularError,
)
from cosinelaw.utils.logging_config import setup_logger

logger = setup_logger(__name__)

SINGULARITY_TOL = 1e-12
INVARIANT_CHECK_TOL = 1e-12
TRANSFORMS = ("switch", "polar", "side_flip", "angle_flip", "jonas")

# (i, j, k) for each output component i.
_CYCLE = ((0, 1, 2), (1, 0, 2), (2, 0, 1))


def _as_triple(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 3:
        raise DimensionError(f"expected a cosine triple, got shape {arr.shape}")
    return arr


def _check_open_cube(x: np.ndarray, what: str = "cosines") -> None:
    if not np.all(np.isfinite(x)) or np.any(np.abs(x) >= 1.0):
        raise DomainError(f"{what} must lie in (-1, 1)", coordinates=np.ravel(x).tolist())


def in_tau(x) -> np.ndarray:
    """True where the cosines are the inner angles of a spherical triangle.

    With alpha = arccos(x): alpha_1 + alpha_2 + alpha_3 > pi and
    -alpha_i + alpha_j + alpha_k < pi for every i.
    """
    x = _as_triple(x)
    inside = np.all(np.abs(x) < 1.0, axis=-1)
    alpha = np.arccos(np.clip(x, -1.0, 1.0))
    total = alpha.sum(axis=-1)
    ok = (total > np.pi) & np.all(total[..., None] - 2.0 * alpha < np.pi, axis=-1)
    return inside & ok


def in_tau_star(y) -> np.ndarray:
    """True where the cosines are the side lengths of a spherical triangle.

    With l = arccos(y): l_1 + l_2 + l_3 < 2 pi and -l_i + l_j + l_k > 0. This
    is exactly membership of -y in the angle domain.
    """
    return in_tau(-_as_triple(y))


def gram_det(x) -> np.ndarray:
    """d(x) = 1 - |x|^2 - 2 x_1 x_2 x_3, the determinant of the angle Gram."""
    x = _as_triple(x)
    return 1.0 - np.sum(x * x, axis=-1) - 2.0 * np.prod(x, axis=-1)


def gram_det_lengths(y) -> np.ndarray:
    """d'(y) = 1 - |y|^2 + 2 y_1 y_2 y_3, the determinant of the length Gram."""
    y = _as_triple(y)
    return 1.0 - np.sum(y * y, axis=-1) + 2.0 * np.prod(y, axis=-1)


def _phi_raw(x: np.ndarray, eps: float = 1.0) -> np.ndarray:
    s = np.sqrt(1.0 - (eps * x) ** 2)
    out = np.empty_like(x)
    for i, j, k in _CYCLE:
        out[..., i] = (x[..., i] + eps * x[..., j] * x[..., k]) / (s[..., j] * s[..., k])
    return out


def phi(x, check_domain: bool = True) -> np.ndarray:
    """Cosine law from angles to sides: y_i = (x_i + x_j x_k) / (s_j s_k).

    Parameters
    ----------
    x : array_like, shape (..., 3)
        Angle cosines.
    check_domain : bool
        Emit a :class:`DomainWarning` when some point lies outside the angle
        domain. The map is still evaluated there.

    Raises
    ------
    DomainError
        If any |x_i| >= 1.
    """
    x = _as_triple(x)
    _check_open_cube(x)
    if check_domain and not np.all(in_tau(x)):
        warnings.warn(
            "phi evaluated outside the angle domain; the result is not a triangle",
            DomainWarning,
            stacklevel=2,
        )
    return _phi_raw(x)


def phi_inv(y) -> np.ndarray:
    """Inverse cosine law: x_i = (y_i - y_j y_k) / (s_j s_k)."""
    y = _as_triple(y)
    _check_open_cube(y)
    s = np.sqrt(1.0 - y * y)
    out = np.empty_like(y)
    for i, j, k in _CYCLE:
        out[..., i] = (y[..., i] - y[..., j] * y[..., k]) / (s[..., j] * s[..., k])
    return out


def phi_eps(x, eps: float) -> np.ndarray:
    """Scaled cosine law phi_eps(x) = phi(eps x) / eps, written without division by eps.

    y_i = (x_i + eps x_j x_k) / sqrt((1 - eps^2 x_j^2)(1 - eps^2 x_k^2)).
    """
    x = _as_triple(x)
    if not np.all(np.abs(eps * x) < 1.0):
        raise DomainError(
            f"eps * x leaves (-1, 1) for eps={eps}", coordinates=np.ravel(x).tolist()
        )
    return _phi_raw(x, eps=eps)


def pair_ratios(x) -> np.ndarray:
    """Vectorized (E_12, E_13, E_23) with E_ij = (1 - x_i^2) / (1 - x_j^2)."""
    x = _as_triple(x)
    a = 1.0 - x * x
    return np.stack(
        [a[..., 0] / a[..., 1], a[..., 0] / a[..., 2], a[..., 1] / a[..., 2]], axis=-1
    )


def invariants(x, check: bool = False) -> TriangleInvariants:
    """Conserved ratios E_ij together with d and gamma^2 at one point.

    With ``check=True`` the sine-law identity d = (1 - y_i^2)(1 - x_j^2)(1 - x_k^2),
    y = phi(x), is verified for every i.

    Raises
    ------
    DomainError
        If any |x_i| >= 1.
    ConsistencyError
        If the requested identity check fails.
    """
    x = _as_triple(x)
    _check_open_cube(x)
    d = float(gram_det(x))
    a = 1.0 - x * x
    if check:
        y = _phi_raw(x)
        for i, j, k in _CYCLE:
            other = (1.0 - y[i] ** 2) * a[j] * a[k]
            if abs(other - d) > INVARIANT_CHECK_TOL * max(1.0, abs(d)):
                raise ConsistencyError(
                    f"sine-law identity fails for component {i + 1}: {other!r} != {d!r}"
                )
    E = pair_ratios(x)
    return TriangleInvariants(
        E=tuple(float(e) for e in E), d=d, gamma2=float(np.prod(a))
    )


def sine_law_ratios(x) -> np.ndarray:
    """sin l_i / sin alpha_i for each i with y = phi(x).

    All three agree with sqrt(d) / gamma on the angle domain.
    """
    x = _as_triple(x)
    _check_open_cube(x)
    y = _phi_raw(x)
    return np.sqrt((1.0 - y * y) / (1.0 - x * x))


def hk_step(x) -> np.ndarray:
    """Hirota-Kimura discretization of the Euler top, equal to phi composed with itself.

    x_i' = (x_i + 2 x_j x_k + x_i(-x_i^2 + x_j^2 + x_k^2)) / d(x).

    Raises
    ------
    SingularError
        If |d(x)| <= 1e-12 anywhere.
    """
    x = _as_triple(x)
    den = gram_det(x)
    if np.any(np.abs(den) <= SINGULARITY_TOL):
        raise SingularError(f"HK denominator {np.min(np.abs(den)):.3e} vanishes")
    return _hk_raw(x, den)


def _hk_raw(x: np.ndarray, den: np.ndarray) -> np.ndarray:
    sq = x * x
    out = np.empty_like(x)
    for i, j, k in _CYCLE:
        num = x[..., i] + 2.0 * x[..., j] * x[..., k] + x[..., i] * (
            -sq[..., i] + sq[..., j] + sq[..., k]
        )
        out[..., i] = num / den
    return out


def jonas(x) -> np.ndarray:
    """The involution f = -hk_step, mapping the sides of a triangle to those of its Jonas triangle."""
    return -hk_step(x)


def hk_implicit_residual(x) -> float:
    """Residual of the implicit HK scheme x' - x = x'_j x_k + x_j x'_k at x' = hk_step(x)."""
    x = _as_triple(x)
    xp = hk_step(x)
    res = 0.0
    for i, j, k in _CYCLE:
        r = xp[..., i] - x[..., i] - (xp[..., j] * x[..., k] + x[..., j] * xp[..., k])
        res = max(res, float(np.max(np.abs(r))))
    return res


def jonas_invariants(x) -> np.ndarray:
    """sin^2 l_i = d / ((1 - x_j^2)(1 - x_k^2)), preserved by the Jonas map."""
    x = _as_triple(x)
    d = gram_det(x)
    a = 1.0 - x * x
    return np.stack([d / (a[..., j] * a[..., k]) for _, j, k in _CYCLE], axis=-1)


def transform(kind: str, x) -> TriangleData:
    """Apply one of the triangle transformations to angle cosines ``x``.

    ================  =====================  ==================
    kind              angles                 sides
    ================  =====================  ==================
    ``switch``        phi(x)                 hk_step(x)
    ``polar``         -phi(x)                -x
    ``side_flip``     -hk_step(x)            -phi(x)
    ``angle_flip``    -x                     hk_step(-phi(x))
    ``jonas``         -hk_step(x)            -phi(x)
    ================  =====================  ==================

    Raises
    ------
    DomainError
        If ``x`` is not in the angle domain (only |x_i| < 1 for ``jonas``).
    ExistenceError
        If the transformed triangle does not exist as a real triangle.
    """
    if kind not in TRANSFORMS:
        raise ValueError(f"unknown transform {kind!r}; choose from {TRANSFORMS}")
    x = _as_triple(x)
    if x.ndim != 1:
        raise DimensionError("transform acts on a single triple")
    _check_open_cube(x)
    if kind != "jonas" and not in_tau(x):
        raise DomainError(f"{x.tolist()} are not the angles of a triangle")
    y = _phi_raw(x)
    if kind == "switch":
        if not in_tau(y):
            raise ExistenceError("the switched triangle does not exist")
        angles, sides = y, hk_step(x)
    elif kind == "polar":
        angles, sides = -y, -x
    elif kind == "side_flip":
        if not in_tau_star(-y):
            raise ExistenceError("the side-flipped triangle does not exist")
        angles, sides = -hk_step(x), -y
    elif kind == "angle_flip":
        if not in_tau(-x):
            raise ExistenceError("the angle-flipped triangle does not exist")
        angles, sides = -x, hk_step(-y)
    else:
        angles, sides = -hk_step(x), -y
    return TriangleData(
        kind=kind,
        angles=tuple(float(v) for v in angles),
        sides=tuple(float(v) for v in sides),
    )


def jacobian_phi(x) -> Tuple[np.ndarray, float]:
    """Closed-form Jacobian of phi and its determinant.

    J_ii = 1 / (s_j s_k) and
    J_ij = (x_k + x_i x_j) / ((1 - x_j^2)^(3/2) (1 - x_k^2)^(1/2)),
    det J = d'(y) / ((1 - x_1^2)(1 - x_2^2)(1 - x_3^2)).

    Raises
    ------
    DomainError
        If ``x`` is not in the angle domain.
    """
    x = _as_triple(x)
    _check_open_cube(x)
    if not in_tau(x):
        raise DomainError(f"{x.tolist()} are not the angles of a triangle")
    a = 1.0 - x * x
    s = np.sqrt(a)
    J = np.empty((3, 3))
    for i, j, k in _CYCLE:
        J[i, i] = 1.0 / (s[j] * s[k])
        J[i, j] = (x[k] + x[i] * x[j]) / (a[j] * s[j] * s[k])
        J[i, k] = (x[j] + x[i] * x[k]) / (a[k] * s[k] * s[j])
    det = float(gram_det_lengths(_phi_raw(x)) / np.prod(a))
    return J, det


def jacobian_det_quotients(x) -> np.ndarray:
    """The three equivalent forms (1 - y_j^2)(1 - y_k^2) / ((1 - x_j^2)(1 - x_k^2)) of det J."""
    x = _as_triple(x)
    y = _phi_raw(x)
    a, b = 1.0 - x * x, 1.0 - y * y
    return np.array([b[j] * b[k] / (a[j] * a[k]) for _, j, k in _CYCLE])


def volume_densities(x) -> np.ndarray:
    """The six densities rho with rho(phi(x)) = det J(x) rho(x).

    Three pair products (1 - x_j^2)(1 - x_k^2), then three squares (1 - x_i^2)^2.
    """
    x = _as_triple(x)
    a = 1.0 - x * x
    pairs = [a[..., j] * a[..., k] for _, j, k in _CYCLE]
    return np.stack(pairs + [a[..., i] ** 2 for i in range(3)], axis=-1)


def _coeffs(C) -> np.ndarray:
    if isinstance(C, PoissonCoeffs):
        return C.array
    return np.asarray(C, dtype=float)


def poisson_bracket(C, x) -> np.ndarray:
    """Bracket matrix P_ij = C_i x_k (1 - x_j^2) - C_j x_k (1 - x_i^2)."""
    c, x = _coeffs(C), _as_triple(x)
    a = 1.0 - x * x
    P = np.zeros((3, 3))
    for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        P[i, j] = x[k] * (c[i] * a[j] - c[j] * a[i])
        P[j, i] = -P[i, j]
    return P


def poisson_bracket_gradient(C, x) -> np.ndarray:
    """Exact derivatives dP[i, j, l] = d P_ij / d x_l."""
    c, x = _coeffs(C), _as_triple(x)
    a = 1.0 - x * x
    dP = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        dP[i, j, k] = c[i] * a[j] - c[j] * a[i]
        dP[i, j, j] = -2.0 * c[i] * x[k] * x[j]
        dP[i, j, i] = 2.0 * c[j] * x[k] * x[i]
        dP[j, i] = -dP[i, j]
    return dP


def jacobi_residual(C, x) -> float:
    """|sum_l P_1l dP_23/dx_l + P_2l dP_31/dx_l + P_3l dP_12/dx_l|."""
    P = poisson_bracket(C, x)
    dP = poisson_bracket_gradient(C, x)
    total = P[0] @ dP[1, 2] + P[1] @ dP[2, 0] + P[2] @ dP[0, 1]
    return float(abs(total))


def poisson_map_residual(C, x) -> float:
    """max |J P(x) J^T - P(phi(x))|, zero when phi is a Poisson map."""
    J, _ = jacobian_phi(x)
    P = poisson_bracket(C, x)
    Py = poisson_bracket(C, _phi_raw(_as_triple(x)))
    return float(np.max(np.abs(J @ P @ J.T - Py)))


def switch_orbit(x, steps: int) -> np.ndarray:
    """Alternate angles and sides: x, phi(x), hk(x), phi(hk(x)), ...

    Each entry is phi of the previous one, so every pair of consecutive rows
    is (angles, sides) of one triangle. Stops before leaving (-1, 1).
    """
    x = _as_triple(x)
    _check_open_cube(x)
    out = [x]
    for _ in range(steps):
        nxt = _phi_raw(out[-1])
        if not np.all(np.isfinite(nxt)) or np.any(np.abs(nxt) >= 1.0):
            logger.info("switch orbit left the cube after %d steps", len(out) - 1)
            break
        out.append(nxt)
    return np.asarray(out)


def to_angles(values, degrees: bool = False) -> np.ndarray:
    """Angles (radians unless ``degrees``) from cosines."""
    ang = np.arccos(np.clip(np.asarray(values, dtype=float), -1.0, 1.0))
    return np.degrees(ang) if degrees else ang


def from_angles(values, degrees: bool = False) -> np.ndarray:
    """Cosines from angles given in radians (or degrees)."""
    ang = np.asarray(values, dtype=float)
    return np.cos(np.radians(ang) if degrees else ang)
