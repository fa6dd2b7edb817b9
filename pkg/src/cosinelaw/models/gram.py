from typing import List, Literal

import numpy as np
from pydantic import BaseModel, Field, model_validator


class GramMatrix(BaseModel):
    """Unit-diagonal symmetric Gram matrix of a spherical triangle or tetrahedron.

    Attributes
    ----------
    n : int
        Size of the matrix, 3 (triangle) or 4 (tetrahedron).
    kind : str
        ``'angles'`` for G = (-cos alpha_ij), ``'lengths'`` for G' = (cos l_ij).
    entries : list of list of float
        The n x n matrix, stored row by row.
    valid : bool
        True when every leading principal minor exceeds the positive-definiteness
        threshold, i.e. when the matrix certifies an existing simplex.
    """

    n: Literal[3, 4] = Field(description="Matrix size (3 or 4).")
    kind: Literal["angles", "lengths"] = Field(
        description="Sign convention of the off-diagonal entries."
    )
    entries: List[List[float]] = Field(description="Matrix entries, row-major.")
    valid: bool = Field(
        default=False, description="Positive definiteness of the matrix."
    )

    @model_validator(mode="after")
    def _check_structure(self):
        a = np.asarray(self.entries, dtype=float)
        if a.shape != (self.n, self.n):
            raise ValueError(f"Gram matrix must be {self.n}x{self.n}, got {a.shape}")
        if not np.array_equal(a, a.T):
            raise ValueError("Gram matrix must be exactly symmetric.")
        if not np.all(np.diag(a) == 1.0):
            raise ValueError("Gram matrix must have a unit diagonal.")
        return self

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=float)


class CofactorBundle(BaseModel):
    """Cofactor matrix g_ij and determinant d of a Gram matrix."""

    cof: List[List[float]] = Field(description="Cofactor matrix (-1)^(i+j) M_ij.")
    det: float = Field(description="Determinant of the Gram matrix.")

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.cof, dtype=float)


class VertexRealization(BaseModel):
    """Unit vectors realizing a spherical simplex and its polar.

    Attributes
    ----------
    V : list of list of float
        Matrix whose columns are the vertices v_i.
    W : list of list of float
        Matrix whose columns are the polar vertices v_i*.
    Dscale : list of float
        Positive diagonal of D = V^T W.
    """

    V: List[List[float]]
    W: List[List[float]]
    Dscale: List[float]

    @property
    def vertices(self) -> np.ndarray:
        return np.asarray(self.V, dtype=float)

    @property
    def polar_vertices(self) -> np.ndarray:
        return np.asarray(self.W, dtype=float)

    @property
    def D(self) -> np.ndarray:
        return np.diag(np.asarray(self.Dscale, dtype=float))
