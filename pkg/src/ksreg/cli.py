"""Command line entry points: verify, orbit, bench, and table.

Every command writes a machine-readable file and prints a short human
summary.  Reports are deterministic for a fixed seed: keys are sorted
and numpy scalars are converted before serialization.
"""

import json
import math
import os
import sys

import click
import numpy as np

from .bench import DEFAULT_GRID, run_benchmark, write_bench_csv
from .flows import (
    collision_set_membership,
    first_collision_time,
    ks_relatedness_harness,
    oscillator_trajectory,
)
from .invariants import eval_generators, eval_generators_batch
from .kepler_dynamics import (
    RadialState,
    radial_collision_time,
    radial_collision_time_quadrature,
    radial_ode_rhs,
    write_trajectory_csv,
)
from .ks_map import (
    ks,
    poisson_property_residual,
    poisson_residual_xi_sweep,
    pullback_angular_momentum,
    pullback_eccentricity,
    pullback_inner_product,
    pullback_kepler_hamiltonian,
)
from .ode import integrate_ode
from .orbit_space import lagrange_identity_check, relation_residuals_batch
from .quadratic_poisson import reference_table_diff, verify_so4_relations
from .sampling import (
    RNG_ALGORITHM,
    sample_collision_slice,
    sample_level_set,
    sample_phase_points,
    sample_xi_zero,
)

FALL_GRID = (0.25, 0.5, 1.0, 1.5, 2.0)


def _suite_so4():
    table = verify_so4_relations()
    return {
        "name": "so4_relations",
        "passed": all(row["match"] for row in table["so4"]),
        "details": {
            "brackets_checked": len(table["so4"]),
            "split_basis_factors": table["xi_eta"],
        },
    }


def _suite_orbit_relations(rng, samples, tol):
    points = sample_phase_points(rng, samples)
    residuals, h2, gap = relation_residuals_batch(eval_generators_batch(points))
    worst = max(float(np.abs(v).max()) for v in residuals.values())
    h2_min = float(h2.min())
    gap_min = float(gap.min())
    return {
        "name": "orbit_relations",
        "passed": worst <= tol and h2_min >= 0.0 and gap_min >= -tol,
        "details": {
            "max_residual": worst,
            "min_h2": h2_min,
            "min_wedge_gap": gap_min,
        },
    }


def _suite_lagrange(rng, samples, tol):
    worst = 0.0
    for z in sample_phase_points(rng, samples):
        checks = lagrange_identity_check(eval_generators(z))
        for lhs, rhs in checks.values():
            worst = max(worst, abs(float(lhs) - float(rhs)))
    return {
        "name": "lagrange_identities",
        "passed": worst <= tol,
        "details": {"max_residual": worst},
    }


def _suite_pullbacks(rng, samples, tol):
    worst = {
        "hamiltonian": 0.0,
        "angular_momentum": 0.0,
        "eccentricity": 0.0,
        "inner_product": 0.0,
    }

    def gap(a, b):
        return max(abs(float(u) - float(v)) for u, v in zip(a, b))

    for z in sample_level_set(rng, samples):
        lhs, rhs = pullback_kepler_hamiltonian(z)
        worst["hamiltonian"] = max(worst["hamiltonian"], abs(float(lhs) - float(rhs)))
        worst["angular_momentum"] = max(
            worst["angular_momentum"], gap(*pullback_angular_momentum(z))
        )
        worst["eccentricity"] = max(worst["eccentricity"], gap(*pullback_eccentricity(z)))
        lhs, rhs = pullback_inner_product(z)
        worst["inner_product"] = max(worst["inner_product"], abs(float(lhs) - float(rhs)))
    return {
        "name": "pullbacks",
        "passed": max(worst.values()) <= tol,
        "details": {"max_gaps": worst},
    }


def _suite_poisson(rng, samples, tol):
    n = min(samples, 200)
    points = sample_xi_zero(rng, n)
    worst = 0.0
    worst_xx = 0.0
    for z in points:
        res = poisson_property_residual(z)
        worst = max(worst, float(np.abs(res).max()))
        worst_xx = max(worst_xx, float(np.abs(res[:3, :3]).max()))
    sweep = poisson_residual_xi_sweep(points[0], np.linspace(-0.5, 0.5, 9))
    return {
        "name": "poisson_matrix",
        "passed": worst <= tol and worst_xx <= 1e-12,
        "details": {
            "points": n,
            "max_residual": worst,
            "max_position_block_residual": worst_xx,
            "off_level_sweep": [[float(xi), float(r)] for xi, r in sweep],
        },
    }


def _suite_collision(rng, samples, tol):
    half = max(samples // 2, 1)
    points = np.concatenate(
        [sample_collision_slice(rng, half), sample_level_set(rng, half)]
    )
    disagreements = 0
    for z in points:
        member = collision_set_membership(z)
        tau = first_collision_time(z)
        pt = ks(z)
        image_member = float(np.linalg.norm(np.cross(pt.x, pt.y))) <= 1e-9
        if member != (tau is not None) or member != image_member:
            disagreements += 1
    return {
        "name": "collision_theorem",
        "passed": disagreements == 0,
        "details": {"points": int(points.shape[0]), "disagreements": disagreements},
    }


def _suite_fall_times(tol):
    worst_quadrature = 0.0
    worst_event = 0.0
    below_apex = True
    for r0 in FALL_GRID:
        closed = radial_collision_time(r0)
        quad = radial_collision_time_quadrature(r0)
        worst_quadrature = max(worst_quadrature, abs(closed - quad))
        res = integrate_ode(
            lambda t, u: np.array(radial_ode_rhs(RadialState(u[0], u[1]))),
            np.array([r0, -math.sqrt(2 / r0 - 1)]),
            (0.0, 4.0),
            event=lambda t, u: u[0] - 1e-6,
        )
        event_gap = abs(res.event_time - closed) if res.status == "event" else math.inf
        worst_event = max(worst_event, event_gap)
        if r0 < 2:
            below_apex = below_apex and closed < math.pi
    apex_exact = radial_collision_time(2.0) == math.pi
    return {
        "name": "fall_times",
        "passed": (
            worst_quadrature <= max(tol, 1e-9)
            and worst_event <= 1e-5
            and below_apex
            and apex_exact
        ),
        "details": {
            "grid": list(FALL_GRID),
            "max_quadrature_gap": worst_quadrature,
            "max_event_gap": worst_event,
            "below_apex_bound": below_apex,
            "apex_value_exact": apex_exact,
        },
    }


def _write_oscillator_csv(path, traj) -> None:
    with open(path, "w") as fh:
        fh.write("t,q1,q2,q3,q4,p1,p2,p3,p4,H2,Xi\n")
        for i, t in enumerate(traj.times):
            row = [
                t,
                *traj.states[i],
                traj.conserved_log["H2"][i],
                traj.conserved_log["Xi"][i],
            ]
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")


@click.group()
def main():
    """Verification and integration tools for the regularized Kepler flow."""


@main.command()
@click.option("--seed", type=int, default=0, show_default=True, help="RNG seed.")
@click.option(
    "--tolerance",
    type=float,
    default=1e-10,
    show_default=True,
    help="Largest residual accepted by the floating-point suites.",
)
@click.option(
    "--samples",
    type=int,
    default=1000,
    show_default=True,
    help="Random phase points per suite.",
)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, writable=True),
    default="verify_report.json",
    show_default=True,
)
def verify(seed, tolerance, samples, out):
    """Run the identity suites and write a JSON report.

    Exits 0 when every suite passes and 1 otherwise; the report is
    written either way.
    """
    if samples <= 0:
        raise click.UsageError("--samples must be positive")
    if tolerance < 0:
        raise click.UsageError("--tolerance must be nonnegative")
    rng = np.random.default_rng(seed)
    suites = [
        _suite_so4(),
        _suite_orbit_relations(rng, samples, tolerance),
        _suite_lagrange(rng, samples, tolerance),
        _suite_pullbacks(rng, samples, tolerance),
        _suite_poisson(rng, samples, tolerance),
        _suite_collision(rng, samples, tolerance),
        _suite_fall_times(tolerance),
    ]
    report = {
        "rng": RNG_ALGORITHM,
        "seed": seed,
        "samples": samples,
        "tolerance": tolerance,
        "suites": suites,
        "passed": all(s["passed"] for s in suites),
    }
    with open(out, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for s in suites:
        click.echo(f"{s['name']}: {'pass' if s['passed'] else 'FAIL'}")
    click.echo(f"report written to {out}")
    if not report["passed"]:
        sys.exit(1)


@main.command()
@click.option(
    "--state",
    default="1,0,0,0,0,0,1,0",
    show_default=True,
    help="Start point as eight comma-separated numbers q1..q4,p1..p4.",
)
@click.option(
    "--t-max",
    type=float,
    default=2 * math.pi,
    show_default=True,
    help="Flow parameter to integrate up to.",
)
@click.option(
    "--samples",
    type=int,
    default=256,
    show_default=True,
    help="Comparison points along the curve.",
)
@click.option(
    "--out-dir",
    type=click.Path(file_okay=False),
    default=".",
    show_default=True,
)
def orbit(state, t_max, samples, out_dir):
    """Push one seed through both flows and write the curves.

    Writes the closed-form chart curve, its image, and the curve the
    integrator produces from the shared start, plus a JSON report with
    the sup gap between the last two.
    """
    try:
        values = tuple(float(s) for s in state.split(","))
    except ValueError:
        raise click.UsageError("--state must be a comma-separated list of numbers")
    if len(values) != 8:
        raise click.UsageError("--state needs exactly eight entries")
    if samples < 2:
        raise click.UsageError("--samples must be at least 2")
    try:
        result = ks_relatedness_harness(values, t_max, samples=samples)
    except ValueError as exc:
        raise click.UsageError(str(exc))

    os.makedirs(out_dir, exist_ok=True)
    grid = np.linspace(0.0, t_max, samples) if t_max > 0 else np.zeros(1)
    paths = {
        "oscillator": os.path.join(out_dir, "oscillator.csv"),
        "ks_image": os.path.join(out_dir, "ks_image.csv"),
        "kepler_integrated": os.path.join(out_dir, "kepler_integrated.csv"),
        "report": os.path.join(out_dir, "orbit_report.json"),
    }
    _write_oscillator_csv(paths["oscillator"], oscillator_trajectory(values, grid))
    write_trajectory_csv(paths["ks_image"], result.times, result.ks_image)
    write_trajectory_csv(paths["kepler_integrated"], result.times, result.integrated)

    report = result.to_json_dict()
    report["state"] = [float(v) for v in values]
    report["files"] = {k: v for k, v in paths.items() if k != "report"}
    with open(paths["report"], "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")

    click.echo(
        f"status {result.status}: max deviation {result.max_deviation:.3e} "
        f"over [0, {result.t_max:g}]"
    )
    if result.collision_time is not None:
        click.echo(
            f"orbit collapses onto the center: physical collision time "
            f"{result.collision_time:.12g}"
        )
    click.echo(f"report written to {paths['report']}")


@main.command()
@click.option(
    "--grid",
    default=",".join(format(v, "g") for v in DEFAULT_GRID),
    show_default=True,
    help="Angular momentum norms to sweep, comma separated.",
)
@click.option(
    "--tolerance",
    type=float,
    default=1e-10,
    show_default=True,
    help="Integrator rtol and atol.",
)
@click.option("--out", default="bench.csv", show_default=True)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["csv", "json"]),
    default="csv",
    show_default=True,
)
def bench(grid, tolerance, out, fmt):
    """Race the raw and regularized integrations toward collision."""
    try:
        values = tuple(float(s) for s in grid.split(",") if s.strip())
    except ValueError:
        raise click.UsageError("--grid must be a comma-separated list of numbers")
    if not values:
        raise click.UsageError("--grid needs at least one value")
    if any(not 0 < v <= 1 for v in values):
        raise click.UsageError("--grid values must lie in (0, 1]")
    rows = run_benchmark(l_values=values, rtol=tolerance, atol=tolerance)
    if fmt == "csv":
        write_bench_csv(out, rows)
    else:
        with open(out, "w") as fh:
            json.dump([r.to_json_dict() for r in rows], fh, indent=2, sort_keys=True)
            fh.write("\n")
    for r in rows:
        flag = "FAILED" if r.failed else "ok"
        click.echo(
            f"|L| = {r.l_norm:<8g} {r.method:<15s} steps {r.steps:>6d}  "
            f"drift {r.max_energy_drift:.3e}  {flag}"
        )
    click.echo(f"table written to {out}")


@main.command()
@click.option("--out", default="table_audit.json", show_default=True)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["json", "csv"]),
    default="json",
    show_default=True,
)
def table(out, fmt):
    """Audit the transcribed induced-field table against the brackets.

    Mismatching rows record where the transcription disagrees with the
    regenerated expressions; they are reported, not failed.
    """
    diff = reference_table_diff()
    mismatches = sum(1 for r in diff if not r["match"])
    if fmt == "json":
        payload = {
            "rows": diff,
            "row_count": len(diff),
            "mismatch_count": mismatches,
        }
        with open(out, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        with open(out, "w") as fh:
            fh.write("field,component,transcribed,regenerated,match\n")
            for r in diff:
                flag = "true" if r["match"] else "false"
                fh.write(
                    f"{r['field']},{r['component']},{r['transcribed']},"
                    f"{r['regenerated']},{flag}\n"
                )
    click.echo(f"{len(diff)} nonzero components, {mismatches} transcription mismatches")
    click.echo(f"audit written to {out}")
