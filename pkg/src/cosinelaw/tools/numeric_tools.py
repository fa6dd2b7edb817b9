"""Finite differences, reproducible sampling and report assembly."""

from typing import Callable, Optional, Sequence

import numpy as np

from cosinelaw.models.report import Failure, Report, SampleConfig
from cosinelaw.utils.exceptions import SamplingError
from cosinelaw.utils.logging_config import setup_logger

logger = setup_logger(__name__)

FD_STEP = 1e-6
MAX_REPORTED_FAILURES = 10


def fd_jacobian(f: Callable[[np.ndarray], np.ndarray], x, h: float = FD_STEP) -> np.ndarray:
    """Central-difference Jacobian, J[:, n] = (f(x + h e_n) - f(x - h e_n)) / 2h."""
    x = np.asarray(x, dtype=float)
    columns = []
    for n in range(x.size):
        step = np.zeros_like(x)
        step[n] = h
        columns.append((np.asarray(f(x + step)) - np.asarray(f(x - step))) / (2.0 * h))
    return np.stack(columns, axis=-1)


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """PCG64 generator seeded with ``seed + stream``; one stream per suite keeps suites independent."""
    return np.random.Generator(np.random.PCG64(seed + stream))


def domain_predicate(domain: str) -> Callable[[np.ndarray], np.ndarray]:
    if domain == "tau3":
        from cosinelaw.tools.triangle_tools import in_tau

        return in_tau
    if domain == "tetra_admissible":
        from cosinelaw.tools.tetra_tools import is_admissible

        return is_admissible
    if domain == "lax_real":
        return lambda x: np.all(np.abs(x) < 1.0, axis=-1)
    raise ValueError(f"unknown domain {domain!r}")


def sample_domain(config: SampleConfig) -> np.ndarray:
    """Rejection-sample ``config.count`` points of the configured domain.

    Proposals are uniform on [-amplitude, amplitude]^dim and are drawn in
    batches. The same configuration always yields the same points.

    Raises
    ------
    SamplingError
        If after ``max_proposals`` proposals the acceptance rate is still
        below ``min_acceptance``.
    """
    if config.amplitude == 0.0:
        return np.zeros((config.count, config.dim))
    rng = make_rng(config.seed, config.stream)
    accept = domain_predicate(config.domain)
    batch = max(1024, 2 * config.count)
    kept = []
    n_kept = proposals = 0
    while n_kept < config.count:
        points = rng.uniform(-config.amplitude, config.amplitude, size=(batch, config.dim))
        good = points[accept(points)]
        kept.append(good)
        n_kept += len(good)
        proposals += batch
        if proposals >= config.max_proposals and n_kept / proposals < config.min_acceptance:
            raise SamplingError(
                f"acceptance {n_kept / proposals:.2e} on {config.domain} with amplitude "
                f"{config.amplitude} after {proposals} proposals"
            )
    logger.debug(
        "sampled %d points of %s (acceptance %.3f)",
        config.count,
        config.domain,
        n_kept / proposals,
    )
    return np.concatenate(kept)[: config.count]


def build_report(
    name: str,
    residuals: Sequence[float],
    tolerance: float,
    inputs: Optional[Sequence] = None,
    informational: bool = False,
    details: Optional[dict] = None,
) -> Report:
    """Summarize per-sample residuals against a tolerance.

    Non-finite residuals count as failures. Up to ten offending samples are
    kept as (input, residual) pairs; the input is empty when none is given.
    """
    res = np.asarray(residuals, dtype=float).ravel()
    bad = ~(res <= tolerance)
    failures = [
        Failure(
            input=[] if inputs is None else np.ravel(inputs[n]).astype(float).tolist(),
            residual=float(res[n]),
        )
        for n in np.flatnonzero(bad)[:MAX_REPORTED_FAILURES]
    ]
    finite = res[np.isfinite(res)]
    max_residual = mean_residual = 0.0
    if res.size:
        max_residual = float(np.max(res)) if finite.size == res.size else float("inf")
        mean_residual = float(np.mean(finite)) if finite.size else float("inf")
    return Report(
        name=name,
        samples=int(res.size),
        max_residual=max_residual,
        mean_residual=mean_residual,
        tolerance=tolerance,
        passed=bool(not bad.any()),
        informational=informational,
        failures=failures,
        details=details or {},
    )
