from typing import Literal, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator

Triple = Tuple[float, float, float]


class CosTriple(BaseModel):
    """Cosines of the three angles (or sides) of a spherical triangle.

    The components are ordered (x_1, x_2, x_3); in lattice language this is
    (x_12, x_13, x_23).
    """

    values: Triple = Field(description="Three cosines in (-1, 1).")

    @field_validator("values")
    @classmethod
    def _open_interval(cls, v):
        if any(abs(c) >= 1.0 for c in v):
            raise ValueError(f"cosines must lie in (-1, 1), got {v}")
        return v

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def in_tau(self) -> bool:
        """Angle-side membership (the cosines are angles of a triangle)."""
        from cosinelaw.tools.triangle_tools import in_tau

        return bool(in_tau(self.array))

    def in_tau_star(self) -> bool:
        """Length-side membership (the cosines are sides of a triangle)."""
        from cosinelaw.tools.triangle_tools import in_tau_star

        return bool(in_tau_star(self.array))


class TriangleInvariants(BaseModel):
    """Conserved ratios and sine-law quantities of a triangle point.

    Attributes
    ----------
    E : tuple of float
        (E_12, E_13, E_23) with E_ij = (1 - x_i^2) / (1 - x_j^2).
    d : float
        d = 1 - x_1^2 - x_2^2 - x_3^2 - 2 x_1 x_2 x_3, the angle Gram determinant.
    gamma2 : float
        gamma^2 = (1 - x_1^2)(1 - x_2^2)(1 - x_3^2).
    """

    E: Triple
    d: float
    gamma2: float


class PoissonCoeffs(BaseModel):
    """Constants C_1, C_2, C_3 selecting a bracket from the invariant family."""

    C: Triple = Field(default=(0.0, 0.0, 0.0))

    @field_validator("C")
    @classmethod
    def _finite(cls, v):
        if not all(np.isfinite(v)):
            raise ValueError("Poisson coefficients must be finite.")
        return v

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.C, dtype=float)


class TriangleData(BaseModel):
    """Angle and side cosines of a triangle produced by a transformation."""

    kind: Literal["switch", "polar", "side_flip", "angle_flip", "jonas"]
    angles: Triple = Field(description="Cosines of the inner angles.")
    sides: Triple = Field(description="Cosines of the side lengths.")

    @property
    def angle_array(self) -> np.ndarray:
        return np.asarray(self.angles, dtype=float)

    @property
    def side_array(self) -> np.ndarray:
        return np.asarray(self.sides, dtype=float)
