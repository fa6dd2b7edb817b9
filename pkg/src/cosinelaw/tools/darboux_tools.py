"""Darboux-type face systems on Z^3 and Z^4 built from the cosine law.

A field lives on the two-dimensional faces of the lattice: x_ij(n) sits on
the face spanned by directions i and j at vertex n. On an elementary cube
with directions (a, b, c) the three initial faces determine the three
shifted ones, T_c x_ab, T_b x_ac and T_a x_bc. The symmetric variant is the
triangle cosine law itself; the general variant has ordered fields
x_ij != x_ji; the alt variant keeps the same numerators over a rational
denominator.
"""

from itertools import combinations, permutations
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

import numpy as np

from cosinelaw.models.lattice import (
    ConsistencyResult,
    CubeFaceState,
    LatticeBoundary,
    LatticeField,
    PLANE_OF_FACE,
    face_keys,
    normal_axis,
)
from cosinelaw.models.tetra_data import PAIRS
from cosinelaw.tools.tetra_tools import _psi_raw, is_admissible
from cosinelaw.tools.triangle_tools import _phi_raw
from cosinelaw.utils.exceptions import DimensionError, DomainError
from cosinelaw.utils.logging_config import setup_logger

logger = setup_logger(__name__)

VARIANTS = ("symmetric", "general", "alt")
FILL_ORDERS = ("lexicographic", "colexicographic", "wavefront")
MODES = ("strict", "lax")
SINGULARITY_TOL = 1e-12

Pair = Tuple[int, int]
Values = Dict[Pair, Union[float, np.ndarray]]


def _third(dirs: Tuple[int, int, int], i: int, j: int) -> int:
    return next(d for d in dirs if d not in (i, j))


def _face_map(variant: str, values: Values, dirs: Tuple[int, int, int]) -> Values:
    """Shifted faces of the cube spanned by ``dirs``; works elementwise on arrays.

    The result maps (i, j) to T_k x_ij where k is the third direction.
    """
    a, b, c = dirs
    if variant == "symmetric":
        x = np.stack(
            [np.asarray(values[(a, b)]), np.asarray(values[(a, c)]), np.asarray(values[(b, c)])],
            axis=-1,
        )
        rad = 1.0 - x * x
        if np.any(rad <= 0.0) or not np.all(np.isfinite(x)):
            raise DomainError(f"1 - x^2 <= 0 on cube {dirs}: min radicand {np.min(rad):.3e}")
        y = _phi_raw(x)
        return {(a, b): y[..., 0], (a, c): y[..., 1], (b, c): y[..., 2]}

    out: Values = {}
    for i, j in permutations(dirs, 2):
        k = _third(dirs, i, j)
        num = values[(i, j)] + values[(i, k)] * values[(k, j)]
        rad_jk = 1.0 - values[(k, j)] * values[(j, k)]
        if variant == "general":
            rad_ik = 1.0 - values[(i, k)] * values[(k, i)]
            worst = np.minimum(rad_ik, rad_jk)
            if np.any(worst <= 0.0):
                raise DomainError(
                    f"radicand 1 - x_ik x_ki or 1 - x_kj x_jk <= 0 for T_{k} x_{i}{j}: "
                    f"{np.min(worst):.3e}"
                )
            out[(i, j)] = num / (np.sqrt(rad_ik) * np.sqrt(rad_jk))
        elif variant == "alt":
            if np.any(np.abs(rad_jk) <= SINGULARITY_TOL):
                raise DomainError(f"denominator 1 - x_kj x_jk vanishes for T_{k} x_{i}{j}")
            out[(i, j)] = num / rad_jk
        else:
            raise ValueError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    return out


def darboux_step(variant: str, state: CubeFaceState) -> CubeFaceState:
    """One elementary-cube step on Z^3.

    The input holds the faces at vertex n; the output field labelled ``'12'``
    is T_3 x_12, ``'13'`` is T_2 x_13 and ``'23'`` is T_1 x_23 (plus the
    transposed labels for the ordered variants).

    Raises
    ------
    DomainError
        If a square-root argument is not positive.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    if state.dim != 3:
        raise DimensionError("darboux_step acts on a three-dimensional cube")
    values = _complete(variant, state.pair_values(), (1, 2, 3))
    out = _face_map(variant, values, (1, 2, 3))
    return CubeFaceState(
        variant=variant,
        dim=3,
        fields={f"{i}{j}": float(v) for (i, j), v in out.items()},
    )


def _complete(variant: str, values: Mapping[Pair, float], dirs: Iterable[int]) -> Values:
    """Fill missing keys: unordered for symmetric, x_ji := x_ij when a transpose is absent."""
    out: Values = {}
    for i, j in combinations(sorted(dirs), 2):
        if (i, j) in values:
            forward = values[(i, j)]
        elif (j, i) in values:
            forward = values[(j, i)]
        else:
            raise DimensionError(f"missing face value x_{i}{j}")
        out[(i, j)] = forward
        if variant != "symmetric":
            out[(j, i)] = values.get((j, i), forward)
    return out


def consistency_4d(
    init: Union[np.ndarray, Mapping[str, float]],
    variant: str = "symmetric",
    mode: str = "strict",
) -> ConsistencyResult:
    """Check that the face map is consistent on a 4D hypercube.

    The six (or twelve) initial face values are shifted along every pair of
    directions in both orders; the residual is the largest discrepancy
    |T_k T_m x_ij - T_m T_k x_ij|.

    Parameters
    ----------
    init : array_like or mapping
        Six values in pair order 12, 13, 23, 14, 24, 34, or a mapping from
        pair labels (ordered labels allowed for the ordered variants).
    variant : str
        ``'symmetric'``, ``'general'`` or ``'alt'``.
    mode : str
        ``'strict'`` requires a positive definite angle Gram (a real
        tetrahedron); ``'lax'`` only needs every radicand to be positive.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {MODES}")
    if isinstance(init, Mapping):
        raw = {(int(k[0]), int(k[1])): float(v) for k, v in init.items()}
    else:
        arr = np.asarray(init, dtype=float).ravel()
        if arr.size != 6:
            raise DimensionError(f"expected six initial values, got {arr.size}")
        raw = {pair: float(v) for pair, v in zip(PAIRS, arr)}
    values = _complete(variant, raw, (1, 2, 3, 4))
    sym = np.array([values[p] for p in PAIRS])
    if mode == "strict" and not is_admissible(sym):
        raise DomainError(
            "initial data is not the dihedral data of a tetrahedron",
            coordinates=sym.tolist(),
        )

    # first[(k, pair)] = T_k x_pair
    first: Dict[Tuple[int, Pair], float] = {}
    for m in range(1, 5):
        dirs = tuple(d for d in range(1, 5) if d != m)
        for pair, v in _face_map(variant, _restrict(values, dirs), dirs).items():
            first[(_third(dirs, *pair), pair)] = float(v)

    # second[pair][(m, k)] = T_k T_m x_pair
    second: Dict[Pair, Dict[Pair, float]] = {}
    for m in range(1, 5):
        dirs = tuple(d for d in range(1, 5) if d != m)
        shifted = {
            pair: first[(m, pair)] for pair in _restrict(values, dirs)
        }
        for pair, v in _face_map(variant, shifted, dirs).items():
            k = _third(dirs, *pair)
            second.setdefault(pair, {})[(m, k)] = float(v)

    residual = 0.0
    final: Dict[str, float] = {}
    for pair, routes in second.items():
        (m, k), value = min(routes.items())
        residual = max(residual, abs(value - routes[(k, m)]))
        final[f"{pair[0]}{pair[1]}"] = value

    symmetry_defect = 0.0
    if variant != "symmetric":
        for i, j in PAIRS:
            symmetry_defect = max(
                symmetry_defect, abs(final[f"{i}{j}"] - final[f"{j}{i}"])
            )

    psi_residual: Optional[float] = None
    if variant == "symmetric" and is_admissible(sym):
        target = _psi_raw(sym)
        got = np.array([final[f"{i}{j}"] for i, j in PAIRS])
        psi_residual = float(np.max(np.abs(got - target)))

    logger.debug("4D consistency (%s, %s): residual %.3e", variant, mode, residual)
    return ConsistencyResult(
        variant=variant,
        residual=residual,
        values=final,
        symmetry_defect=symmetry_defect,
        psi_residual=psi_residual,
    )


def _restrict(values: Values, dirs: Tuple[int, ...]) -> Values:
    return {p: v for p, v in values.items() if p[0] in dirs and p[1] in dirs}


def _boundary_faces(variant: str, boundary: LatticeBoundary) -> Dict[str, np.ndarray]:
    nx, ny, nz = boundary.extent
    faces = {}
    for key in face_keys(variant):
        axis = normal_axis(key)
        shape = [nx, ny, nz]
        shape[axis] += 1
        arr = np.full(shape, np.nan)
        index = [slice(None)] * 3
        index[axis] = 0
        arr[tuple(index)] = boundary.plane(PLANE_OF_FACE[key])
        faces[key] = arr
    return faces


def _cube_inputs(variant: str, faces: Dict[str, np.ndarray], idx) -> Values:
    return {(int(k[0]), int(k[1])): faces[k][idx] for k in face_keys(variant)}


def _store(faces: Dict[str, np.ndarray], out: Values, idx) -> None:
    for (i, j), v in out.items():
        key = f"{i}{j}"
        axis = normal_axis(key)
        target = list(idx)
        target[axis] = target[axis] + 1
        faces[key][tuple(target)] = v


def _cube_order(extent: Tuple[int, int, int], fill_order: str):
    nx, ny, nz = extent
    if fill_order == "lexicographic":
        return ((p, q, r) for p in range(nx) for q in range(ny) for r in range(nz))
    return ((p, q, r) for r in range(nz) for q in range(ny) for p in range(nx))


def lattice_evolve(
    variant: str,
    boundary: LatticeBoundary,
    fill_order: str = "lexicographic",
) -> LatticeField:
    """Fill the box given by ``boundary.extent`` from its three boundary planes.

    Every cube is computed once its three lower faces are known; the
    lexicographic and colexicographic orders visit cubes one by one, the
    wavefront order evaluates all cubes with equal p + q + r at once.

    Raises
    ------
    DomainError
        On the first cube (in lexicographic order within the failing step)
        where a radicand is not positive; ``coordinates`` holds its index.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    if fill_order not in FILL_ORDERS:
        raise ValueError(f"unknown fill order {fill_order!r}; choose from {FILL_ORDERS}")
    faces = _boundary_faces(variant, boundary)
    if fill_order == "wavefront":
        _fill_wavefront(variant, faces, boundary.extent)
    else:
        for idx in _cube_order(boundary.extent, fill_order):
            _fill_cube(variant, faces, idx)
    logger.info(
        "Evolved %s lattice of extent %s (%s)", variant, boundary.extent, fill_order
    )
    return LatticeField(
        variant=variant, extent=boundary.extent, fill_order=fill_order, faces=faces
    )


def _fill_cube(variant: str, faces: Dict[str, np.ndarray], idx) -> None:
    try:
        out = _face_map(variant, _cube_inputs(variant, faces, idx), (1, 2, 3))
    except DomainError as e:
        raise DomainError(f"cube {idx}: {e}", coordinates=list(idx)) from e
    _store(faces, out, idx)


def _fill_wavefront(variant: str, faces: Dict[str, np.ndarray], extent) -> None:
    nx, ny, nz = extent
    grid = np.indices((nx, ny, nz)).reshape(3, -1)
    level = grid.sum(axis=0)
    for s in range(nx + ny + nz - 2):
        idx = tuple(grid[:, level == s])
        try:
            out = _face_map(variant, _cube_inputs(variant, faces, idx), (1, 2, 3))
        except DomainError:
            for cube in sorted(zip(*(a.tolist() for a in idx))):
                _fill_cube(variant, faces, cube)
            continue
        _store(faces, out, idx)


def lattice_residual(field: LatticeField) -> float:
    """Recompute every cube from the stored field and return the largest mismatch."""
    nx, ny, nz = field.extent
    idx = tuple(np.indices((nx, ny, nz)).reshape(3, -1))
    out = _face_map(field.variant, _cube_inputs(field.variant, field.faces, idx), (1, 2, 3))
    worst = 0.0
    for (i, j), v in out.items():
        key = f"{i}{j}"
        axis = normal_axis(key)
        target = list(idx)
        target[axis] = target[axis] + 1
        worst = max(worst, float(np.max(np.abs(field.faces[key][tuple(target)] - v))))
    return worst


def symmetric_reduction_residual(init) -> float:
    """Distance between the general variant on symmetric data and the symmetric variant."""
    sym = consistency_4d(init, variant="symmetric", mode="lax")
    gen = consistency_4d(init, variant="general", mode="lax")
    return max(abs(gen.values[k] - v) for k, v in sym.values.items())
