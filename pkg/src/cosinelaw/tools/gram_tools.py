"""Gram matrices, closed-form cofactors and the cosine-law duality.

For a spherical triangle (n = 3) or tetrahedron (n = 4) the angle Gram matrix
G = (-cos alpha_ij) and the length Gram matrix G' = (cos l_ij) are related by

    G' = D G^{-1} D,   D = diag(sqrt(d / g_ii)),

where g_ij are the cofactors of G and d = det G. Off the diagonal this is the
cosine law cos l_ij = g_ij / sqrt(g_ii g_jj).
"""

from typing import Sequence

import numpy as np

from cosinelaw.models.gram import CofactorBundle, GramMatrix, VertexRealization
from cosinelaw.utils.exceptions import DegenerateError, DimensionError, DomainError
from cosinelaw.utils.logging_config import setup_logger

logger = setup_logger(__name__)

POSITIVE_DEFINITE_TOL = 1e-12
DEGENERACY_TOL = 1e-12

# Off-diagonal positions in canonical pair order.
_OFFDIAG = {
    3: ((0, 1), (0, 2), (1, 2)),
    4: ((0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)),
}
_SIZE_OF_COUNT = {3: 3, 6: 4}


def dual_kind(kind: str) -> str:
    return "lengths" if kind == "angles" else "angles"


def _sign(kind: str) -> float:
    return -1.0 if kind == "angles" else 1.0


def _det2(a: np.ndarray) -> float:
    return a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]


def _det3(a: np.ndarray) -> float:
    return (
        a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
        - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
        + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
    )


def _det4(a: np.ndarray) -> float:
    total = 0.0
    for j in range(4):
        minor = np.delete(a[1:], j, axis=1)
        total += (-1.0) ** j * a[0, j] * _det3(minor)
    return total


_DET = {1: lambda a: a[0, 0], 2: _det2, 3: _det3, 4: _det4}


def determinant(a: np.ndarray) -> float:
    """Closed-form determinant of a matrix of size at most 4."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in _DET:
        raise DimensionError(f"closed-form determinant needs n <= 4, got {a.shape}")
    return float(_DET[a.shape[0]](a))


def leading_minors(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return np.array([determinant(a[:k, :k]) for k in range(1, a.shape[0] + 1)])


def is_positive_definite(a, tol: float = POSITIVE_DEFINITE_TOL) -> bool:
    """Sylvester's criterion with every leading minor required to exceed ``tol``."""
    if isinstance(a, GramMatrix):
        a = a.array
    return bool(np.all(leading_minors(a) > tol))


def gram_from_cosines(
    kind: str, cosines: Sequence[float], tol: float = POSITIVE_DEFINITE_TOL
) -> GramMatrix:
    """Assemble the Gram matrix of ``kind`` from cosines in canonical pair order.

    Parameters
    ----------
    kind : str
        ``'angles'`` or ``'lengths'``.
    cosines : sequence of float
        Three cosines (12, 13, 23) or six cosines (12, 13, 23, 14, 24, 34).
    tol : float
        Positive-definiteness threshold used for the ``valid`` flag.

    Returns
    -------
    GramMatrix
        The assembled matrix; an indefinite matrix is returned with
        ``valid=False`` rather than rejected.
    """
    c = np.asarray(cosines, dtype=float).ravel()
    if c.size not in _SIZE_OF_COUNT:
        raise DimensionError(f"expected 3 or 6 cosines, got {c.size}")
    if not np.all(np.isfinite(c)) or np.any(np.abs(c) > 1.0):
        raise DomainError("cosines must lie in [-1, 1]", coordinates=c.tolist())
    n = _SIZE_OF_COUNT[c.size]
    a = np.eye(n)
    for value, (i, j) in zip(c, _OFFDIAG[n]):
        a[i, j] = a[j, i] = _sign(kind) * value
    valid = is_positive_definite(a, tol)
    if not valid:
        logger.debug("Gram matrix of %s %s is not positive definite", kind, c.tolist())
    return GramMatrix(n=n, kind=kind, entries=a.tolist(), valid=valid)


def cofactors(gram: GramMatrix) -> CofactorBundle:
    """Cofactor matrix and determinant by explicit minors, never by inversion."""
    a = gram.array
    n = a.shape[0]
    cof = np.empty_like(a)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(a, i, axis=0), j, axis=1)
            cof[i, j] = (-1.0) ** (i + j) * determinant(minor)
    det = float(np.dot(a[0], cof[0]))
    return CofactorBundle(cof=cof.tolist(), det=det)


def cosine_law_dual(gram: GramMatrix, tol: float = DEGENERACY_TOL) -> np.ndarray:
    """Cosines of the dual kind via c_ij = g_ij / sqrt(g_ii g_jj).

    For an angle Gram the result are the side cosines cos l_ij; for a length
    Gram the result are the angle cosines cos alpha_ij (the sign convention is
    reversed accordingly).

    Raises
    ------
    DegenerateError
        If a diagonal cofactor is at most ``tol``.
    """
    cof = cofactors(gram).array
    diag = np.diag(cof)
    if np.any(diag <= tol):
        raise DegenerateError(
            f"diagonal cofactor {diag.min():.3e} at or below {tol:.0e}"
        )
    sign = -_sign(gram.kind)
    out = [cof[i, j] / np.sqrt(diag[i] * diag[j]) for i, j in _OFFDIAG[gram.n]]
    return sign * np.asarray(out)


def dual_gram(gram: GramMatrix) -> GramMatrix:
    """Gram matrix of the dual kind built from :func:`cosine_law_dual`."""
    return gram_from_cosines(dual_kind(gram.kind), cosine_law_dual(gram))


def duality_residual(gram: GramMatrix, dual: GramMatrix) -> float:
    """max |G' - D G^{-1} D| with D_ii = sqrt(d / g_ii).

    Raises
    ------
    DomainError
        If the kinds are not opposite or the sizes differ.
    DegenerateError
        If det G or a diagonal cofactor is at most the degeneracy threshold.
    """
    if gram.kind == dual.kind or gram.n != dual.n:
        raise DomainError(
            f"cannot compare a {gram.kind} Gram of size {gram.n} with a "
            f"{dual.kind} Gram of size {dual.n}"
        )
    bundle = cofactors(gram)
    cof, det = bundle.array, bundle.det
    diag = np.diag(cof)
    if det <= DEGENERACY_TOL or np.any(diag <= DEGENERACY_TOL):
        raise DegenerateError(f"Gram determinant {det:.3e} is degenerate")
    inverse = cof.T / det
    D = np.diag(np.sqrt(det / diag))
    return float(np.max(np.abs(dual.array - D @ inverse @ D)))


def realize_vertices(gram: GramMatrix) -> VertexRealization:
    """Unit vertex vectors with V^T V = gram and the polar vectors W.

    V is the transposed Cholesky factor. W = V^{-T} with unit columns, so that
    W^T W is the dual Gram matrix and V^T W is a positive diagonal D.

    Raises
    ------
    DegenerateError
        If ``gram`` is not positive definite within the threshold.
    """
    a = gram.array
    if not is_positive_definite(a):
        raise DegenerateError(
            f"{gram.kind} Gram matrix is not positive definite; no simplex exists"
        )
    try:
        L = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as e:
        raise DegenerateError(f"Cholesky factorization failed: {e}") from e
    if np.min(np.diag(L)) <= DEGENERACY_TOL:
        raise DegenerateError("Cholesky pivot at or below threshold")
    V = L.T
    polar = np.linalg.inv(V).T
    norms = np.linalg.norm(polar, axis=0)
    W = polar / norms
    return VertexRealization(V=V.tolist(), W=W.tolist(), Dscale=(1.0 / norms).tolist())
