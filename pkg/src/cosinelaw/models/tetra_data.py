from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator

# Canonical order of index pairs for every six-component vector.
PAIRS: Tuple[Tuple[int, int], ...] = ((1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4))
PAIR_LABELS: Tuple[str, ...] = tuple(f"{i}{j}" for i, j in PAIRS)
PAIR_INDEX: Dict[Tuple[int, int], int] = {}
for _n, (_i, _j) in enumerate(PAIRS):
    PAIR_INDEX[(_i, _j)] = _n
    PAIR_INDEX[(_j, _i)] = _n

# Position of the complementary pair: 12<->34, 13<->24, 23<->14.
COMPLEMENT: Tuple[int, ...] = (5, 4, 3, 2, 1, 0)


def complement(i: int, j: int) -> Tuple[int, int]:
    """Return the sorted pair (k, m) completing (i, j) to {1, 2, 3, 4}."""
    k, m = sorted({1, 2, 3, 4} - {i, j})
    return k, m


class CosSextuple(BaseModel):
    """Cosines of the six dihedral angles (or edge lengths) of a tetrahedron.

    Components follow the fixed pair order 12, 13, 23, 14, 24, 34.
    """

    values: Tuple[float, float, float, float, float, float]

    @field_validator("values")
    @classmethod
    def _open_interval(cls, v):
        if any(abs(c) >= 1.0 for c in v):
            raise ValueError(f"cosines must lie in (-1, 1), got {v}")
        return v

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def is_admissible(self) -> bool:
        from cosinelaw.tools.tetra_tools import is_admissible

        return bool(is_admissible(self.array))


class TetraInvariants(BaseModel):
    """The four integrals of the tetrahedral map relative to the (12, 34) pairing."""

    r1: float = Field(description="(1-x13^2)(1-x24^2) / ((1-x12^2)(1-x34^2))")
    r2: float = Field(description="(1-x23^2)(1-x14^2) / ((1-x12^2)(1-x34^2))")
    s1: float = Field(description="(x12 x34 - x13 x24) / sqrt((1-x12^2)(1-x34^2))")
    s2: float = Field(description="(x13 x24 - x23 x14) / sqrt((1-x12^2)(1-x34^2))")

    def as_array(self) -> np.ndarray:
        return np.array([self.r1, self.r2, self.s1, self.s2])


class LinkTriangle(BaseModel):
    """Link Lk(m): the triangle cut by the great sphere polar to vertex m.

    Its angles are the dihedral angles at the edges through m, its sides are
    the planar angles at m.
    """

    vertex: int = Field(ge=1, le=4)
    pairs: Tuple[str, str, str] = Field(description="Labels of the three pairs ij.")
    planar_cosines: Tuple[float, float, float]


class TwoStageResult(BaseModel):
    """Edge-length cosines obtained by two rounds of the triangle cosine law."""

    values: Tuple[float, float, float, float, float, float]
    discrepancy: float = Field(
        description="Largest difference between the two faces producing an edge."
    )
    routes: Dict[str, List[float]] = Field(
        default_factory=dict, description="Both answers per edge label."
    )

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)
