from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Variant = Literal["symmetric", "general", "alt"]

# Boundary plane name of each face component: face (i, j) is normal to axis k.
PLANE_OF_FACE: Dict[str, str] = {
    "12": "xy",
    "13": "xz",
    "23": "yz",
    "21": "yx",
    "31": "zx",
    "32": "zy",
}


def face_keys(variant: str) -> Tuple[str, ...]:
    """Field components carried by a variant: unordered for symmetric, ordered otherwise."""
    if variant == "symmetric":
        return ("12", "13", "23")
    return ("12", "21", "13", "31", "23", "32")


def normal_axis(key: str) -> int:
    """Zero-based lattice axis normal to face component ``key``."""
    i, j = int(key[0]), int(key[1])
    return 6 - i - j - 1


class CubeFaceState(BaseModel):
    """Face values on one elementary cube (or 4D hypercube).

    ``fields`` maps a pair label such as ``'12'`` (or ``'21'`` for the ordered
    variants) to the value on the face spanned by directions 1 and 2.
    """

    variant: Variant = "symmetric"
    dim: Literal[3, 4] = 3
    fields: Dict[str, float]

    @model_validator(mode="after")
    def _check_keys(self):
        for key in self.fields:
            if len(key) != 2 or not key.isdigit() or key[0] == key[1]:
                raise ValueError(f"invalid face label {key!r}")
            if max(int(key[0]), int(key[1])) > self.dim:
                raise ValueError(f"face {key!r} exceeds dimension {self.dim}")
        return self

    def pair_values(self) -> Dict[Tuple[int, int], float]:
        return {(int(k[0]), int(k[1])): v for k, v in self.fields.items()}


class LatticeBoundary(BaseModel):
    """Initial data on the three coordinate planes of a Z^3 box.

    ``planes['xy']`` has shape (nx, ny), ``planes['xz']`` (nx, nz) and
    ``planes['yz']`` (ny, nz). The ordered variants may add ``'yx'``, ``'zx'``
    and ``'zy'``; missing transposed planes default to their untransposed
    counterparts.
    """

    extent: Tuple[int, int, int]
    planes: Dict[str, List[List[float]]]

    @field_validator("extent")
    @classmethod
    def _positive(cls, v):
        if any(n < 1 for n in v):
            raise ValueError(f"extent must be positive, got {v}")
        return v

    @model_validator(mode="after")
    def _check_planes(self):
        nx, ny, nz = self.extent
        shapes = {
            "xy": (nx, ny),
            "yx": (nx, ny),
            "xz": (nx, nz),
            "zx": (nx, nz),
            "yz": (ny, nz),
            "zy": (ny, nz),
        }
        for required in ("xy", "xz", "yz"):
            if required not in self.planes:
                raise ValueError(f"missing boundary plane {required!r}")
        for name, values in self.planes.items():
            if name not in shapes:
                raise ValueError(f"unknown boundary plane {name!r}")
            shape = np.asarray(values, dtype=float).shape
            if shape != shapes[name]:
                raise ValueError(
                    f"plane {name!r} must have shape {shapes[name]}, got {shape}"
                )
        return self

    def plane(self, name: str) -> np.ndarray:
        fallback = {"yx": "xy", "zx": "xz", "zy": "yz"}
        if name not in self.planes:
            name = fallback[name]
        return np.asarray(self.planes[name], dtype=float)


class LatticeField(BaseModel):
    """Face field on a finite box after evolution.

    Component ``key`` has the box extent along every axis except its normal
    axis, where it has one extra layer; layer 0 is the boundary plane.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    variant: Variant
    extent: Tuple[int, int, int]
    fill_order: str = "lexicographic"
    faces: Dict[str, np.ndarray]

    def to_json_dict(self) -> dict:
        planes = {}
        for key in face_keys(self.variant):
            axis = normal_axis(key)
            planes[PLANE_OF_FACE[key]] = np.take(self.faces[key], 0, axis=axis).tolist()
        return {
            "extent": list(self.extent),
            "variant": self.variant,
            "fill_order": self.fill_order,
            "planes": planes,
            "faces": {key: arr.tolist() for key, arr in self.faces.items()},
        }


class ConsistencyResult(BaseModel):
    """Outcome of the 4D consistency check on one hypercube."""

    variant: Variant
    residual: float = Field(description="max |T_k T_m x - T_m T_k x| over all faces.")
    values: Dict[str, float] = Field(
        description="Fully shifted face values, keyed by pair label."
    )
    symmetry_defect: float = Field(
        default=0.0, description="max |x_ij - x_ji| for the ordered variants."
    )
    psi_residual: Optional[float] = Field(
        default=None, description="Distance of the shifted values from psi(x)."
    )
