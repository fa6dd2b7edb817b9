from typing import List, Literal

import numpy as np
from pydantic import BaseModel, Field, model_validator

FlowSystem = Literal["euler3", "coupled6"]
SYSTEM_DIM = {"euler3": 3, "coupled6": 6}


class FlowState(BaseModel):
    """Point of a continuous system: the Euler top or the coupled six-variable flow."""

    system: FlowSystem
    x: List[float]

    @model_validator(mode="after")
    def _check_dim(self):
        if len(self.x) != SYSTEM_DIM[self.system]:
            raise ValueError(
                f"{self.system} expects {SYSTEM_DIM[self.system]} components, "
                f"got {len(self.x)}"
            )
        return self

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.x, dtype=float)


class LimitOrderResult(BaseModel):
    """Convergence order of a scaled discrete map towards its continuous flow.

    Attributes
    ----------
    slope : float
        Least-squares slope of log(defect) against log(eps); ``inf`` when every
        defect vanishes.
    eps : list of float
        Scales used.
    defects : list of float
        Max-norm distance between one map step and one RK4 step at each scale.
    """

    map_kind: Literal["phi_eps", "psi"]
    slope: float
    eps: List[float]
    defects: List[float] = Field(default_factory=list)
