from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

Domain = Literal["tau3", "tetra_admissible", "lax_real"]


class SampleConfig(BaseModel):
    """Reproducible sampling request.

    Points are drawn uniformly from [-amplitude, amplitude]^dim with a PCG64
    generator seeded by ``seed + stream`` and kept when they lie in ``domain``.
    """

    seed: int = Field(default=0, ge=0, lt=2**64)
    stream: int = Field(default=0, ge=0)
    count: int = Field(default=1000, gt=0)
    domain: Domain = "tau3"
    amplitude: float = Field(default=0.5, ge=0.0, le=1.0)
    dim: Optional[int] = Field(default=None, description="Defaults from the domain.")
    max_proposals: int = Field(default=1_000_000, gt=0)
    min_acceptance: float = Field(default=1e-4, gt=0.0, le=1.0)

    @model_validator(mode="after")
    def _default_dim(self):
        if self.dim is None:
            self.dim = 6 if self.domain == "tetra_admissible" else 3
        return self


class Failure(BaseModel):
    """One offending sample and its residual."""

    input: List[float] = Field(default_factory=list)
    residual: float


class Report(BaseModel):
    """Outcome of one verification suite."""

    name: str
    samples: int = Field(ge=0)
    max_residual: float
    mean_residual: float
    tolerance: float
    passed: bool
    informational: bool = Field(
        default=False, description="Reported only, never fails the run."
    )
    failures: List[Failure] = Field(
        default_factory=list, description="Up to ten offending samples."
    )
    details: Dict[str, float] = Field(default_factory=dict)


class VerificationSummary(BaseModel):
    """All suite reports of one ``verify all`` run."""

    seed: int
    samples: int
    reports: Dict[str, Report]

    @property
    def passed(self) -> bool:
        return all(r.passed or r.informational for r in self.reports.values())

    def failed(self) -> List[str]:
        return [
            name
            for name, r in self.reports.items()
            if not (r.passed or r.informational)
        ]
