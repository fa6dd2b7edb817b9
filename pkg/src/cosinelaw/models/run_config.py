from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class TriangleSolveConfig(_Strict):
    """Solve a triangle from its three angles or from its three sides."""

    angles: Optional[List[float]] = Field(default=None, min_length=3, max_length=3)
    sides: Optional[List[float]] = Field(default=None, min_length=3, max_length=3)
    degrees: bool = False

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.angles is None) == (self.sides is None):
            raise ValueError("give exactly one of angles or sides")
        return self


class TetraSolveConfig(_Strict):
    """Solve a tetrahedron from its six dihedral angles (pair order 12, 13, 23, 14, 24, 34)."""

    dihedral: List[float] = Field(min_length=6, max_length=6)
    degrees: bool = False


class OrbitConfig(_Strict):
    x: List[float]
    map: Literal["phi", "hk", "jonas", "psi"]
    steps: int = Field(default=1000, ge=0)
    boundary_margin: float = Field(default=1e-3, ge=0.0, lt=1.0)
    out: Optional[str] = None
    float_format: str = "%.17g"


class LatticeConfig(_Strict):
    init: str
    out: str
    variant: Literal["symmetric", "general", "alt"] = "symmetric"
    fill_order: Literal["lexicographic", "colexicographic", "wavefront"] = "lexicographic"
    tolerance: float = Field(default=1e-12, gt=0.0)


class VerifyConfig(_Strict):
    seed: int = Field(default=42, ge=0)
    samples: int = Field(default=1000, gt=0)
    workers: int = Field(default=1, ge=1)
    out: Optional[str] = None


class LimitConfig(_Strict):
    map: Literal["phi_eps", "psi"]
    x0: List[float]
    eps_list: List[float] = Field(default_factory=lambda: [1e-2, 5e-3, 2.5e-3], min_length=2)
    slope_threshold: float = 1.9


class FlowConfig(_Strict):
    system: Literal["euler3", "coupled6"]
    x: List[float]
    h: float = Field(default=1e-3, gt=0.0)
    steps: int = Field(default=1000, ge=0)
    out: Optional[str] = None
    float_format: str = "%.17g"
