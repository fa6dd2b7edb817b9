from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, Field

OrbitMap = Literal["phi", "hk", "jonas", "psi"]


class Orbit(BaseModel):
    """Iterates of a discrete map together with its integrals along the way.

    ``points[n]`` is the n-th iterate, ``invariants[n]`` the integrals at that
    iterate in the column order of ``invariant_names``. ``status`` is
    ``'completed'`` or names the reason the orbit stopped early.
    """

    map_kind: OrbitMap
    points: List[List[float]]
    invariants: List[List[float]]
    invariant_names: List[str]
    requested_steps: int
    status: str = "completed"
    stopped_at: Optional[int] = Field(
        default=None, description="Index of the last recorded iterate when stopped early."
    )

    @property
    def steps(self) -> int:
        return len(self.points) - 1

    def drift(self) -> float:
        """Largest change of any integral, relative to max(1, |initial value|)."""
        inv = np.asarray(self.invariants, dtype=float)
        if inv.shape[0] < 2:
            return 0.0
        scale = np.maximum(1.0, np.abs(inv[0]))
        return float(np.max(np.abs(inv - inv[0]) / scale))
