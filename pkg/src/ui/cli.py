#!/usr/bin/env python3
"""
CosineLaw Command Line Interface

Solve spherical triangles and tetrahedra, iterate the cosine-law maps, evolve
Darboux lattices and run the full verification battery.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ValidationError
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from cosinelaw.models.lattice import LatticeBoundary
from cosinelaw.models.run_config import (
    FlowConfig,
    LatticeConfig,
    LimitConfig,
    OrbitConfig,
    TetraSolveConfig,
    TriangleSolveConfig,
    VerifyConfig,
)
from cosinelaw.models.tetra_data import PAIR_LABELS, CosSextuple
from cosinelaw.models.triangle_data import CosTriple
from cosinelaw.tools import (
    darboux_tools,
    euler_tools,
    orbit_tools,
    tetra_tools,
    triangle_tools,
    verify_tools,
)
from cosinelaw.utils.exceptions import CosineLawError, DomainError
from cosinelaw.utils.logging_config import set_package_level
from ui.config import command_settings, load_config

console = Console()

CHECK_TOL = 1e-10
# Flags whose values may start with a minus sign.
VECTOR_FLAGS = ("--angles", "--sides", "--dihedral", "--x", "--x0", "--eps-list")


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _attach_values(argv: List[str]) -> List[str]:
    """Rewrite ``--x -0.5,...`` as ``--x=-0.5,...`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        token = argv[i]
        if token in VECTOR_FLAGS and i + 1 < len(argv):
            out.append(f"{token}={argv[i + 1]}")
            i += 2
        else:
            out.append(token)
            i += 1
    return out


def _add_orbit_parser(group, common, maps, default):
    orbit = group.add_parser("orbit", parents=[common], help="Iterate a map")
    orbit.add_argument("--x", type=_floats, help="Starting cosines")
    orbit.add_argument("--map", choices=maps, default=default)
    orbit.add_argument("--steps", type=int)
    orbit.add_argument("--boundary-margin", type=float)
    orbit.add_argument("--out", type=str, help="Write the orbit as CSV")


def create_argument_parser() -> argparse.ArgumentParser:
    """Create and configure the argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, help="Load settings from a TOML or JSON file")
    common.add_argument(
        "-v", "--verbose", action="store_true", help="Log debugging details"
    )

    parser = argparse.ArgumentParser(
        prog="cosinelaw",
        description="CosineLaw CLI - spherical cosine laws as integrable maps",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s triangle solve --angles 1.5707963,1.5707963,1.5707963
  %(prog)s triangle orbit --x -0.5,-0.5,-0.5 --map hk --steps 3 --out orbit.csv
  %(prog)s tetra solve --dihedral 1.9,1.9,1.9,1.9,1.9,1.9
  %(prog)s lattice evolve --init boundary.json --out field.json
  %(prog)s verify all --seed 42 --samples 1000 --out report.json
  %(prog)s limit --map phi_eps --x0 0.3,-0.2,0.5
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    triangle = sub.add_parser("triangle", help="Spherical triangles").add_subparsers(
        dest="action", required=True
    )
    solve = triangle.add_parser("solve", parents=[common], help="Solve a triangle")
    solve.add_argument("--angles", type=_floats, help="Inner angles a,b,c (radians)")
    solve.add_argument("--sides", type=_floats, help="Side lengths a,b,c (radians)")
    solve.add_argument("--degrees", action="store_const", const=True, help="Angles in degrees")

    _add_orbit_parser(triangle, common, ("phi", "hk", "jonas"), default=None)

    tetra = sub.add_parser("tetra", help="Spherical tetrahedra").add_subparsers(
        dest="action", required=True
    )
    tsolve = tetra.add_parser("solve", parents=[common], help="Solve a tetrahedron")
    tsolve.add_argument(
        "--dihedral",
        type=_floats,
        help="Six dihedral angles in pair order 12,13,23,14,24,34 (radians)",
    )
    tsolve.add_argument("--degrees", action="store_const", const=True, help="Angles in degrees")
    _add_orbit_parser(tetra, common, ("psi",), default="psi")

    lattice = sub.add_parser("lattice", help="Darboux lattices").add_subparsers(
        dest="action", required=True
    )
    evolve = lattice.add_parser("evolve", parents=[common], help="Evolve a Z^3 box")
    evolve.add_argument("--init", type=str, help="Boundary planes (JSON)")
    evolve.add_argument("--out", type=str, help="Evolved field (JSON)")
    evolve.add_argument("--variant", choices=darboux_tools.VARIANTS)
    evolve.add_argument("--fill-order", choices=darboux_tools.FILL_ORDERS)

    verify = sub.add_parser("verify", help="Verification battery").add_subparsers(
        dest="action", required=True
    )
    vall = verify.add_parser("all", parents=[common], help="Run every suite")
    vall.add_argument("--seed", type=int)
    vall.add_argument("--samples", type=int)
    vall.add_argument("--workers", type=int)
    vall.add_argument("--out", type=str, help="Write the report as JSON")

    limit = sub.add_parser("limit", parents=[common], help="Continuum-limit order")
    limit.add_argument("--map", choices=euler_tools.LIMIT_MAPS)
    limit.add_argument("--x0", type=_floats)
    limit.add_argument("--eps-list", type=_floats)

    flow = sub.add_parser("flow", parents=[common], help="RK4 trajectory of a flow")
    flow.add_argument("--system", choices=euler_tools.SYSTEMS)
    flow.add_argument("--x", type=_floats)
    flow.add_argument("--h", type=float)
    flow.add_argument("--steps", type=int)
    flow.add_argument("--out", type=str, help="Write the trajectory as CSV")
    return parser


def _command_key(args: argparse.Namespace) -> str:
    action = getattr(args, "action", None)
    return f"{args.command}_{action}" if action else args.command


def _build(model: type, args: argparse.Namespace, config: Dict[str, Any]) -> BaseModel:
    """File values first, explicit flags on top; unknown keys are rejected."""
    settings = command_settings(config, _command_key(args))
    skip = {"command", "action", "config", "verbose"}
    for key, value in vars(args).items():
        if key not in skip and value is not None:
            settings[key] = value
    return model(**settings)


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def triangle_solve(cfg: TriangleSolveConfig) -> int:
    if cfg.angles is not None:
        point = CosTriple(values=tuple(triangle_tools.from_angles(cfg.angles, cfg.degrees)))
        if not point.in_tau():
            raise DomainError(f"{cfg.angles} are not the angles of a spherical triangle")
        x = point.array
        y = triangle_tools.phi(x)
    else:
        point = CosTriple(values=tuple(triangle_tools.from_angles(cfg.sides, cfg.degrees)))
        if not point.in_tau_star():
            raise DomainError(f"{cfg.sides} are not the sides of a spherical triangle")
        y = point.array
        x = triangle_tools.phi_inv(y)

    unit = "deg" if cfg.degrees else "rad"
    table = Table(title="Spherical triangle")
    for column in ("i", f"angle ({unit})", "cos angle", f"side ({unit})", "cos side"):
        table.add_column(column, justify="right")
    angles = triangle_tools.to_angles(x, cfg.degrees)
    sides = triangle_tools.to_angles(y, cfg.degrees)
    for i in range(3):
        table.add_row(str(i + 1), _fmt(angles[i]), _fmt(x[i]), _fmt(sides[i]), _fmt(y[i]))
    console.print(table)

    d = float(triangle_tools.gram_det(x))
    d_len = float(triangle_tools.gram_det_lengths(y))
    ratios = triangle_tools.sine_law_ratios(x)
    console.print(f"d  = {_fmt(d)}")
    console.print(f"d' = {_fmt(d_len)}")
    console.print(f"sin(side)/sin(angle) = {_fmt(float(ratios[0]))}")
    return 0


def tetra_solve(cfg: TetraSolveConfig) -> int:
    x = CosSextuple(values=tuple(triangle_tools.from_angles(cfg.dihedral, cfg.degrees))).array
    y = tetra_tools.psi(x)
    two_stage = tetra_tools.two_stage_solve(x)
    first, second = tetra_tools.sine_law_residuals(x, y)

    unit = "deg" if cfg.degrees else "rad"
    table = Table(title="Spherical tetrahedron")
    for column in ("pair", f"dihedral ({unit})", "cos dihedral", f"edge ({unit})", "cos edge"):
        table.add_column(column, justify="right")
    dihedral = triangle_tools.to_angles(x, cfg.degrees)
    edges = triangle_tools.to_angles(y, cfg.degrees)
    for n, label in enumerate(PAIR_LABELS):
        table.add_row(label, _fmt(dihedral[n]), _fmt(x[n]), _fmt(edges[n]), _fmt(y[n]))
    console.print(table)

    inv = tetra_tools.tetra_invariants(x)
    console.print(f"integrals: r1={_fmt(inv.r1)} r2={_fmt(inv.r2)} s1={_fmt(inv.s1)} s2={_fmt(inv.s2)}")
    console.print(f"two-stage discrepancy: {two_stage.discrepancy:.3e}")
    console.print(f"sine-law residuals: {first:.3e}, {second:.3e}")
    worst = max(two_stage.discrepancy, first, second)
    if worst > CHECK_TOL:
        console.print(f"[red]✗ check residual {worst:.3e} exceeds {CHECK_TOL:.0e}[/red]")
        return 1
    return 0


def orbit_command(cfg: OrbitConfig) -> int:
    point = CosSextuple if cfg.map == "psi" else CosTriple
    start = point(values=tuple(cfg.x)).array
    orbit = orbit_tools.run_orbit(cfg.map, start, cfg.steps, cfg.boundary_margin)
    frame = orbit_tools.orbit_frame(orbit)
    table = Table(title=f"{cfg.map} orbit")
    for column in frame.columns:
        table.add_column(str(column), justify="right")
    shown = frame if len(frame) <= 12 else frame.iloc[list(range(6)) + list(range(-6, 0))]
    for _, row in shown.iterrows():
        table.add_row(*(str(v) if isinstance(v, str) else f"{v:.10g}" for v in row))
    console.print(table)
    console.print(
        f"steps: {orbit.steps}/{cfg.steps}  status: {orbit.status}  "
        f"integral drift: {orbit.drift():.3e}"
    )
    if cfg.out:
        orbit_tools.write_orbit_csv(orbit, cfg.out, cfg.float_format)
        console.print(f"[green]✓ Orbit saved to: {cfg.out}[/green]")
    return 0


def lattice_evolve(cfg: LatticeConfig) -> int:
    with open(cfg.init, "r") as f:
        boundary = LatticeBoundary(**json.load(f))
    field = darboux_tools.lattice_evolve(cfg.variant, boundary, cfg.fill_order)
    residual = darboux_tools.lattice_residual(field)
    out = Path(cfg.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w") as f:
        json.dump(field.to_json_dict(), f)
    console.print(f"[green]✓ Field of extent {field.extent} saved to: {cfg.out}[/green]")
    console.print(f"per-cube residual: {residual:.3e}")
    if residual > cfg.tolerance:
        console.print(f"[red]✗ residual exceeds {cfg.tolerance:.0e}[/red]")
        return 1
    return 0


def verify_all(cfg: VerifyConfig) -> int:
    summary = verify_tools.run_all(cfg.seed, cfg.samples, cfg.workers)
    table = Table(title=f"Verification (seed {cfg.seed}, {cfg.samples} samples)")
    for column in ("suite", "samples", "max residual", "tolerance", "result"):
        table.add_column(column)
    for name, report in summary.reports.items():
        if report.informational:
            result = "[yellow]info[/yellow]"
        elif report.passed:
            result = "[green]pass[/green]"
        else:
            result = "[red]FAIL[/red]"
        table.add_row(
            name,
            str(report.samples),
            f"{report.max_residual:.3e}",
            f"{report.tolerance:.0e}",
            result,
        )
    console.print(table)
    if cfg.out:
        out = Path(cfg.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(summary.model_dump_json(indent=2))
        console.print(f"[green]✓ Report saved to: {cfg.out}[/green]")
    if not summary.passed:
        for name in summary.failed():
            console.print(
                Panel(summary.reports[name].model_dump_json(indent=2), title=name, style="red")
            )
        return 1
    return 0


def limit_command(cfg: LimitConfig) -> int:
    result = euler_tools.limit_order(cfg.map, cfg.x0, cfg.eps_list)
    table = Table(title=f"{cfg.map} vs RK4")
    table.add_column("eps", justify="right")
    table.add_column("defect", justify="right")
    for e, d in zip(result.eps, result.defects):
        table.add_row(f"{e:.3e}", f"{d:.3e}")
    console.print(table)
    console.print(f"slope: {result.slope:.4f}")
    if result.slope < cfg.slope_threshold:
        console.print(f"[red]✗ slope below {cfg.slope_threshold}[/red]")
        return 1
    return 0


def flow_command(cfg: FlowConfig) -> int:
    traj = euler_tools.rk4(cfg.system, cfg.x, cfg.h, cfg.steps)
    frame = euler_tools.trajectory_frame(cfg.system, traj, cfg.h)
    inv = frame[[c for c in frame.columns if c.endswith("_inv")]].to_numpy()
    drift = float(np.max(np.abs(inv - inv[0])))
    console.print(f"{cfg.system}: {cfg.steps} RK4 steps of size {cfg.h}, integral drift {drift:.3e}")
    if cfg.out:
        out = Path(cfg.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(out, index=False, float_format=cfg.float_format)
        console.print(f"[green]✓ Trajectory saved to: {cfg.out}[/green]")
    return 0


COMMANDS = {
    "triangle_solve": (TriangleSolveConfig, triangle_solve),
    "triangle_orbit": (OrbitConfig, orbit_command),
    "tetra_solve": (TetraSolveConfig, tetra_solve),
    "tetra_orbit": (OrbitConfig, orbit_command),
    "lattice_evolve": (LatticeConfig, lattice_evolve),
    "verify_all": (VerifyConfig, verify_all),
    "limit": (LimitConfig, limit_command),
    "flow": (FlowConfig, flow_command),
}


def run(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, execute the command and return the exit code.

    0 when every executed check passes, 1 on a failed tolerance or a domain
    error, 2 on a usage or configuration error.
    """
    parser = create_argument_parser()
    argv = _attach_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = load_config(args.config)
    except (FileNotFoundError, ValueError) as e:
        console.print(f"[red]✗[/red] {e}")
        return 2
    level = "DEBUG" if args.verbose else config["logging"]["level"]
    set_package_level(level, config["logging"]["format"])

    key = _command_key(args)
    model, handler = COMMANDS[key]
    try:
        cfg = _build(model, args, config)
    except ValidationError as e:
        console.print(f"[red]✗ Invalid settings for {key.replace('_', ' ')}:[/red]\n{e}")
        return 2
    try:
        return handler(cfg)
    except CosineLawError as e:
        console.print(f"[red]✗ {type(e).__name__}: {e}[/red]")
        return 1
    except (OSError, ValueError) as e:
        console.print(f"[red]✗ {e}[/red]")
        return 2


def main(argv: Optional[List[str]] = None):
    """Main CLI entry point."""
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
