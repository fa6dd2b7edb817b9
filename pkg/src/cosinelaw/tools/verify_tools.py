"""Randomized verification of every identity the package relies on.

Each suite samples its own points from a PCG64 stream derived from the run
seed and its position in :data:`SUITE_MANIFEST`, so a suite's outcome does
not depend on which other suites run or in which order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List

import numpy as np

from cosinelaw.models.lattice import LatticeBoundary
from cosinelaw.models.report import Report, SampleConfig, VerificationSummary
from cosinelaw.models.tetra_data import PAIR_LABELS
from cosinelaw.tools import (
    darboux_tools,
    euler_tools,
    gram_tools,
    orbit_tools,
    tetra_tools,
    triangle_tools,
)
from cosinelaw.tools.numeric_tools import build_report, fd_jacobian, make_rng, sample_domain
from cosinelaw.utils.exceptions import CosineLawError, ExistenceError
from cosinelaw.utils.logging_config import setup_logger

logger = setup_logger(__name__)

TAU_AMPLITUDE = 0.5
TETRA_AMPLITUDE = 0.3
ORBIT_STEPS = 1000
ORBIT_MARGIN = 1e-2
# 1000-step orbits only stay admissible when they start near the fixed point 0
PHI_ORBIT_AMPLITUDE = 5e-4
HK_ORBIT_AMPLITUDE = 2.5e-4
PSI_ORBIT_AMPLITUDE = 2.5e-4
JONAS_ORBIT_AMPLITUDE = 0.1
FLOW_AMPLITUDE = 0.04
ALT_SYMMETRY_TOL = 1e-8
SLOPE_THRESHOLD = 1.9
LIMIT_EPS = (1e-2, 5e-3, 2.5e-3)

Suite = Callable[[np.random.Generator, int, int], Report]
_SUITES: Dict[str, Suite] = {}


def suite(name: str):
    def register(fn: Suite) -> Suite:
        _SUITES[name] = fn
        return fn

    return register


def _sample(seed: int, stream: int, count: int, domain: str, amplitude: float) -> np.ndarray:
    return sample_domain(
        SampleConfig(seed=seed, stream=stream, count=count, domain=domain, amplitude=amplitude)
    )


def _tau(seed, stream, count, amplitude=TAU_AMPLITUDE):
    return _sample(seed, stream, count, "tau3", amplitude)


def _tetra(seed, stream, count, amplitude=TETRA_AMPLITUDE):
    return _sample(seed, stream, count, "tetra_admissible", amplitude)


def _rows(fn, xs) -> np.ndarray:
    return np.array([fn(x) for x in xs], dtype=float)


def _maxabs(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


# -- Gram matrices -------------------------------------------------------------


@suite("gram.dual_path_triangle")
def _gram_dual_triangle(seed, stream, n):
    xs = _tau(seed, stream, n)
    ys = triangle_tools.phi(xs)
    res = _rows(
        lambda k: _maxabs(
            ys[k], gram_tools.cosine_law_dual(gram_tools.gram_from_cosines("angles", xs[k]))
        ),
        range(n),
    )
    return build_report("gram.dual_path_triangle", res, 1e-13, xs)


@suite("gram.dual_path_tetra")
def _gram_dual_tetra(seed, stream, n):
    xs = _tetra(seed, stream, n)
    ys = tetra_tools.psi(xs)
    res = _rows(
        lambda k: _maxabs(
            ys[k], gram_tools.cosine_law_dual(gram_tools.gram_from_cosines("angles", xs[k]))
        ),
        range(n),
    )
    return build_report("gram.dual_path_tetra", res, 1e-13, xs)


@suite("gram.round_trip")
def _gram_round_trip(seed, stream, n):
    xs3, xs6 = _tau(seed, stream, n), _tetra(seed, stream, n)
    res = np.concatenate(
        [
            np.max(np.abs(triangle_tools.phi_inv(triangle_tools.phi(xs3)) - xs3), axis=-1),
            np.max(np.abs(tetra_tools.psi_inv(tetra_tools.psi(xs6)) - xs6), axis=-1),
        ]
    )
    return build_report("gram.round_trip", res, 1e-10)


@suite("gram.duality_residual")
def _gram_duality(seed, stream, n):
    xs = list(_tau(seed, stream, n)) + list(_tetra(seed, stream, n))

    def one(x):
        G = gram_tools.gram_from_cosines("angles", x)
        return gram_tools.duality_residual(G, gram_tools.dual_gram(G))

    return build_report("gram.duality_residual", _rows(one, xs), 1e-10)


@suite("gram.realize_vertices")
def _gram_realize(seed, stream, n):
    xs = list(_tau(seed, stream, n)) + list(_tetra(seed, stream, n))

    def one(x):
        G = gram_tools.gram_from_cosines("angles", x)
        Gp = gram_tools.dual_gram(G)
        r = gram_tools.realize_vertices(Gp)
        V, W = r.vertices, r.polar_vertices
        return max(
            _maxabs(V.T @ V, Gp.array),
            _maxabs(W.T @ W, G.array),
            _maxabs(V.T @ W, r.D),
        )

    return build_report("gram.realize_vertices", _rows(one, xs), 1e-12)


# -- triangle ------------------------------------------------------------------


@suite("triangle.conjugation")
def _triangle_conjugation(seed, stream, n):
    ys = triangle_tools.phi(_tau(seed, stream, n))
    res = np.max(np.abs(triangle_tools.phi_inv(ys) + triangle_tools._phi_raw(-ys)), axis=-1)
    return build_report("triangle.conjugation", res, 1e-13, ys)


@suite("triangle.domain_map")
def _triangle_domain(seed, stream, n):
    xs = _tau(seed, stream, n)
    res = (~triangle_tools.in_tau_star(triangle_tools.phi(xs))).astype(float)
    return build_report("triangle.domain_map", res, 0.0, xs)


@suite("triangle.sine_law")
def _triangle_sine_law(seed, stream, n):
    xs = _tau(seed, stream, n)
    target = np.sqrt(triangle_tools.gram_det(xs) / np.prod(1.0 - xs * xs, axis=-1))
    res = np.max(np.abs(triangle_tools.sine_law_ratios(xs) - target[:, None]), axis=-1)
    return build_report("triangle.sine_law", res, 1e-12, xs)


def _drift_suite(name, map_kind, sampler, amplitude):
    def run(seed, stream, n):
        xs = sampler(seed, stream, n, amplitude)
        drift, lengths = orbit_tools.batch_orbits(map_kind, xs, ORBIT_STEPS, ORBIT_MARGIN)
        # orbits cut short by the boundary count as failures
        res = np.where(lengths == ORBIT_STEPS, drift, np.inf)
        return build_report(
            name,
            res,
            1e-10,
            xs,
            details={
                "min_steps": float(np.min(lengths)),
                "completed_fraction": float(np.mean(lengths == ORBIT_STEPS)),
            },
        )

    return run


suite("triangle.integrals_phi")(
    _drift_suite("triangle.integrals_phi", "phi", _tau, PHI_ORBIT_AMPLITUDE)
)
suite("triangle.integrals_hk")(
    _drift_suite("triangle.integrals_hk", "hk", _tau, HK_ORBIT_AMPLITUDE)
)
suite("triangle.integrals_jonas")(
    _drift_suite("triangle.integrals_jonas", "jonas", _tau, JONAS_ORBIT_AMPLITUDE)
)


@suite("triangle.volume_forms")
def _triangle_volume(seed, stream, n):
    xs = _tau(seed, stream, n)

    def one(x):
        _, det = triangle_tools.jacobian_phi(x)
        rho_x = triangle_tools.volume_densities(x)
        rho_y = triangle_tools.volume_densities(triangle_tools.phi(x))
        quotients = triangle_tools.jacobian_det_quotients(x)
        return max(
            float(np.max(np.abs(rho_y - det * rho_x) / np.abs(rho_y))),
            float(np.max(np.abs(quotients - det))) / abs(det),
        )

    return build_report("triangle.volume_forms", _rows(one, xs), 1e-11, xs)


@suite("triangle.jacobian_fd")
def _triangle_jacobian(seed, stream, n):
    xs = _tau(seed, stream, n)
    res = _rows(
        lambda x: _maxabs(triangle_tools.jacobian_phi(x)[0], fd_jacobian(triangle_tools._phi_raw, x)),
        xs,
    )
    return build_report("triangle.jacobian_fd", res, 1e-6, xs)


@suite("triangle.hk_phi_squared")
def _triangle_hk(seed, stream, n):
    xs = _tau(seed, stream, n)
    hk = triangle_tools.hk_step(xs)
    twice = triangle_tools._phi_raw(triangle_tools._phi_raw(xs))
    scale = np.maximum(1.0, np.max(np.abs(hk), axis=-1))
    res = np.max(np.abs(hk - twice), axis=-1) / scale
    implicit = _rows(triangle_tools.hk_implicit_residual, xs) / scale**2
    return build_report("triangle.hk_phi_squared", np.maximum(res, implicit), 1e-12, xs)


@suite("triangle.symmetric_orbits")
def _triangle_symmetric(seed, stream, n):
    steps = 20
    cases = [
        ("phi", np.full(3, -0.5), lambda k: -1.0 / (k + 2)),
        ("hk", np.full(3, -0.5), lambda k: -1.0 / (2 * k + 2)),
        ("psi", np.full(6, -0.5), lambda k: -1.0 / (2 * k + 2)),
    ]
    res = []
    for map_kind, x0, closed in cases:
        orbit = orbit_tools.run_orbit(map_kind, x0, steps, boundary_margin=0.0)
        pts = np.asarray(orbit.points)
        expected = np.array([closed(k) for k in range(len(pts))])
        res.append(float(np.max(np.abs(pts - expected[:, None]))))
    return build_report("triangle.symmetric_orbits", res, 1e-14)


@suite("triangle.switch_factorization")
def _triangle_switch(seed, stream, n):
    xs = _tau(seed, stream, n)
    res = []
    for x in xs:
        try:
            s = triangle_tools.transform("switch", x)
            f = triangle_tools.transform("side_flip", x)
        except ExistenceError:
            continue
        # the polar triangle swaps the roles of angles and sides with a sign
        res.append(max(_maxabs(s.angle_array, -f.side_array), _maxabs(s.side_array, -f.angle_array)))
    return build_report("triangle.switch_factorization", res, 1e-12)


@suite("triangle.jonas")
def _triangle_jonas(seed, stream, n):
    xs = _tau(seed, stream, n)
    fx = triangle_tools.jonas(xs)
    # real Jonas triangles away from the degenerate boundary
    real = np.all(np.abs(fx) < 1.0, axis=-1) & (triangle_tools.gram_det(fx) > 1e-2)
    xs, fx = xs[real], fx[real]
    back = triangle_tools.jonas(fx)
    res = np.maximum(
        np.max(np.abs(back - xs), axis=-1),
        np.max(
            np.abs(triangle_tools.jonas_invariants(fx) - triangle_tools.jonas_invariants(xs)),
            axis=-1,
        ),
    )
    return build_report("triangle.jonas", res, 1e-12, xs)


@suite("triangle.jacobi_identity")
def _triangle_jacobi(seed, stream, n):
    rng = make_rng(seed, stream + 1000)
    coeffs = rng.uniform(-1.0, 1.0, size=(100, 3))
    xs = _tau(seed, stream, max(1, n // 10))
    res = [triangle_tools.jacobi_residual(C, x) for C in coeffs for x in xs]
    return build_report("triangle.jacobi_identity", res, 1e-13)


@suite("triangle.poisson_map")
def _triangle_poisson(seed, stream, n):
    rng = make_rng(seed, stream + 1000)
    xs = _tau(seed, stream, n)
    coeffs = rng.uniform(-1.0, 1.0, size=(n, 3))
    res = [triangle_tools.poisson_map_residual(C, x) for C, x in zip(coeffs, xs)]
    return build_report("triangle.poisson_map", res, 1e-10, xs)


# -- tetrahedron ---------------------------------------------------------------


suite("tetra.integrals_psi")(
    _drift_suite("tetra.integrals_psi", "psi", _tetra, PSI_ORBIT_AMPLITUDE)
)


@suite("tetra.det_factorization")
def _tetra_det(seed, stream, n):
    xs = _tetra(seed, stream, n)

    def one(x):
        fac = tetra_tools.jacobian_det_factorized(x)
        return abs(tetra_tools.jacobian_psi(x)[1] - fac) / abs(fac)

    return build_report("tetra.det_factorization", _rows(one, xs), 1e-9, xs)


@suite("tetra.volume_forms")
def _tetra_volume(seed, stream, n):
    xs = _tetra(seed, stream, n)

    def one(x):
        det = tetra_tools.jacobian_det_factorized(x)
        rho_y = tetra_tools.volume_densities(tetra_tools.psi(x))
        return float(np.max(np.abs(rho_y - det * tetra_tools.volume_densities(x)) / rho_y))

    return build_report("tetra.volume_forms", _rows(one, xs), 1e-9, xs)


@suite("tetra.ggs")
def _tetra_ggs(seed, stream, n):
    xs = _tetra(seed, stream, n)
    return build_report("tetra.ggs", _rows(tetra_tools.ggs_residual, xs), 1e-10, xs)


@suite("tetra.sine_laws")
def _tetra_sine(seed, stream, n):
    xs = _tetra(seed, stream, n)
    res = _rows(lambda x: max(tetra_tools.sine_law_residuals(x)), xs)
    return build_report("tetra.sine_laws", res, 1e-10, xs)


@suite("tetra.jacobian_fd")
def _tetra_jacobian(seed, stream, n):
    xs = _tetra(seed, stream, n)
    res = _rows(
        lambda x: _maxabs(tetra_tools.jacobian_psi(x)[0], fd_jacobian(tetra_tools._psi_raw, x)),
        xs,
    )
    return build_report("tetra.jacobian_fd", res, 1e-6, xs)


@suite("tetra.two_stage")
def _tetra_two_stage(seed, stream, n):
    xs = _tetra(seed, stream, n)
    res = _rows(
        lambda x: _maxabs(tetra_tools.two_stage_solve(x).array, tetra_tools.psi(x)), xs
    )
    return build_report("tetra.two_stage", res, 1e-10, xs)


@suite("tetra.schlafli_symmetry")
def _tetra_schlafli(seed, stream, n):
    alphas = np.arccos(_tetra(seed, stream, min(n, 200)))
    res = _rows(tetra_tools.schlafli_symmetry_residual, alphas)
    return build_report("tetra.schlafli_symmetry", res, 1e-8, alphas)


# -- Darboux systems -----------------------------------------------------------


@suite("darboux.consistency_4d")
def _darboux_consistency(seed, stream, n):
    xs = _tetra(seed, stream, n)
    results = [darboux_tools.consistency_4d(x, "symmetric", "strict") for x in xs]
    res = [max(r.residual, r.psi_residual) for r in results]
    return build_report("darboux.consistency_4d", res, 1e-10, xs)


def _ordered_data(seed, stream, n):
    rng = make_rng(seed, stream)
    data = rng.uniform(-TETRA_AMPLITUDE, TETRA_AMPLITUDE, size=(n, 12))
    labels = list(PAIR_LABELS) + [label[::-1] for label in PAIR_LABELS]
    return data, [dict(zip(labels, row)) for row in data]


@suite("darboux.general_consistency")
def _darboux_general(seed, stream, n):
    data, inits = _ordered_data(seed, stream, n)
    res = [darboux_tools.consistency_4d(d, "general", "lax").residual for d in inits]
    return build_report("darboux.general_consistency", res, 1e-10, data)


@suite("darboux.symmetric_reduction")
def _darboux_reduction(seed, stream, n):
    xs = _tetra(seed, stream, n)
    res = _rows(darboux_tools.symmetric_reduction_residual, xs)
    return build_report("darboux.symmetric_reduction", res, 1e-14, xs)


@suite("darboux.lattice")
def _darboux_lattice(seed, stream, n):
    rng = make_rng(seed, stream)
    size = 8
    planes = {
        name: rng.uniform(-0.1, 0.1, size=(size, size)).tolist() for name in ("xy", "xz", "yz")
    }
    boundary = LatticeBoundary(extent=(size, size, size), planes=planes)
    fields = {
        order: darboux_tools.lattice_evolve("symmetric", boundary, order)
        for order in darboux_tools.FILL_ORDERS
    }
    base = fields["lexicographic"]
    order_gap = max(
        _maxabs(base.faces[key], other.faces[key])
        for other in fields.values()
        for key in base.faces
    )
    residual = darboux_tools.lattice_residual(base)
    return build_report(
        "darboux.lattice",
        [residual, order_gap],
        1e-12,
        details={"cube_residual": residual, "fill_order_gap": order_gap},
    )


@suite("darboux.alt_variant")
def _darboux_alt(seed, stream, n):
    xs = _tetra(seed, stream, n)
    results = []
    for x in xs:
        try:
            results.append(darboux_tools.consistency_4d(x, "alt", "lax"))
        except CosineLawError:
            continue
    res = [r.residual for r in results]
    defects = np.array([r.symmetry_defect for r in results], dtype=float)
    asymmetric = float(np.mean(defects > ALT_SYMMETRY_TOL)) if defects.size else 0.0
    return build_report(
        "darboux.alt_variant",
        res,
        1e-10,
        informational=True,
        details={
            "symmetry_defect": float(np.max(defects, initial=0.0)),
            "asymmetric_fraction": asymmetric,
        },
    )


# -- continuous limit ----------------------------------------------------------


def _limit_suite(name, map_kind, dim):
    def run(seed, stream, n):
        rng = make_rng(seed, stream)
        x0s = rng.uniform(-1.0, 1.0, size=(min(n, 20), dim))
        slopes = np.array(
            [euler_tools.limit_order(map_kind, x0, LIMIT_EPS).slope for x0 in x0s]
        )
        res = np.maximum(0.0, SLOPE_THRESHOLD - slopes)
        return build_report(
            name, res, 0.0, x0s, details={"min_slope": float(np.min(slopes))}
        )

    return run


suite("euler.limit_phi_eps")(_limit_suite("euler.limit_phi_eps", "phi_eps", 3))
suite("euler.limit_psi")(_limit_suite("euler.limit_psi", "psi", 6))


@suite("euler.decoupling")
def _euler_decoupling(seed, stream, n):
    xs = make_rng(seed, stream).uniform(-1.0, 1.0, size=(n, 6))
    p, q = euler_tools.decouple(xs)
    back = np.max(np.abs(euler_tools.recouple(p, q) - xs), axis=-1)
    push = _rows(euler_tools.pushforward_residual, xs)
    rel = _rows(euler_tools.integral_relations_residual, xs)
    return build_report("euler.decoupling", np.maximum(back, np.maximum(push, rel)), 1e-13, xs)


@suite("euler.rk4_drift")
def _euler_drift(seed, stream, n):
    rng = make_rng(seed, stream)
    res = []
    for system, dim in (("euler3", 3), ("coupled6", 6)):
        x0 = rng.uniform(-FLOW_AMPLITUDE, FLOW_AMPLITUDE, size=(min(n, 100), dim))
        traj = euler_tools.rk4(system, x0, 1e-3, 10_000)
        inv = euler_tools.integrals_continuous(system, traj)
        res.extend(np.max(np.abs(inv - inv[0]), axis=(0, 2)))
    return build_report("euler.rk4_drift", res, 1e-10)


@suite("euler.rk4_order")
def _euler_order(seed, stream, n):
    rng = make_rng(seed, stream)
    slopes = []
    for system, dim in (("euler3", 3), ("coupled6", 6)):
        x0 = rng.uniform(-0.5, 0.5, size=dim)
        slopes.append(euler_tools.rk4_order(system, x0, (0.1, 0.05, 0.025), 1.0))
    res = np.maximum(0.0, 3.8 - np.asarray(slopes))
    return build_report("euler.rk4_order", res, 0.0, details={"min_slope": min(slopes)})


SUITE_MANIFEST: List[str] = list(_SUITES)


def run_suite(name: str, seed: int, samples: int) -> Report:
    """Run one suite; an unexpected library error is reported as a failure."""
    stream = SUITE_MANIFEST.index(name)
    try:
        report = _SUITES[name](seed, stream, samples)
    except CosineLawError as e:
        logger.error("suite %s raised %s: %s", name, type(e).__name__, e)
        report = Report(
            name=name,
            samples=0,
            max_residual=float("inf"),
            mean_residual=float("inf"),
            tolerance=0.0,
            passed=False,
            details={},
        )
    level = logging.INFO if report.passed or report.informational else logging.WARNING
    logger.log(
        level, "%-32s max %.3e (tol %.0e)", name, report.max_residual, report.tolerance
    )
    return report


def run_all(seed: int, samples: int, workers: int = 1) -> VerificationSummary:
    """Run every suite of :data:`SUITE_MANIFEST`; ``workers > 1`` runs suites in threads."""
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda s: run_suite(s, seed, samples), SUITE_MANIFEST))
    else:
        reports = [run_suite(s, seed, samples) for s in SUITE_MANIFEST]
    return VerificationSummary(
        seed=seed, samples=samples, reports={r.name: r for r in reports}
    )
