"""Command line front end.

Subcommands: ``classify``, ``phase``, ``triangle``, ``metric-grid``,
``stokes``, ``verify``.  Inputs are JSON files in which every complex number
is a two-element array ``[re, im]``; observables are ``{"matrix": [[...]]}``
and curves are ``{"samples": [[[re, im], ...], ...], "closed": true}``.
Every command writes a JSON report; ``metric-grid`` writes its CSV table to
the output path and the report next to it.  All numbers in a report are
produced by library operations; the front end only parses, dispatches and
serializes.

Exit codes: 0 success, 2 validation or parse error, 3 numerical or
singularity error, 4 verification suite failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .classify import classify, ray_from_vector
from .core import (
    DEFAULT_TOL,
    NumericalDomainError,
    ObsPhaseError,
    Observable,
    ToleranceConfig,
    ValidationError,
    eigendecompose,
)
from .curves import surface_by_name
from .holonomy import DiscreteCurve, PhaseResult, loop_phase, three_point_phase
from .kahler import form_coeffs, kahler_potential, metric_coeffs, two_state_chart
from .surface import SurfaceMesh, stokes_convergence
from .verify import DEFAULT_SEED, run_verification

__all__ = ["JobSpec", "run", "main"]

_COMMANDS = ("classify", "phase", "triangle", "metric-grid", "stokes", "verify")

_CSV_HEADER = ["theta", "phi", "re_z", "im_z", "kahler_potential", "g11_re", "f11_im"]


@dataclass(frozen=True)
class JobSpec:
    """One fully resolved command line invocation."""

    command: str
    input_path: Path | None
    output_path: Path
    tol: ToleranceConfig
    seed: int
    resolution: int
    sign: int

    def __post_init__(self) -> None:
        if self.command not in _COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")


def _parse_complex(node, where: str) -> complex:
    if (not isinstance(node, (list, tuple)) or len(node) != 2
            or not all(isinstance(x, (int, float)) for x in node)):
        raise ValidationError(f"{where}: complex numbers are [re, im] pairs, got {node!r}")
    return complex(node[0], node[1])


def _parse_state(node, where: str) -> np.ndarray:
    if not isinstance(node, list) or len(node) < 2:
        raise ValidationError(f"{where}: a state is a list of at least two [re, im] pairs")
    return np.array([_parse_complex(x, f"{where}[{i}]") for i, x in enumerate(node)])


def _parse_observable(node, where: str, tol: ToleranceConfig) -> Observable:
    if not isinstance(node, dict) or "matrix" not in node:
        raise ValidationError(f'{where}: an observable is {{"matrix": [[[re, im], ...], ...]}}')
    rows = node["matrix"]
    if not isinstance(rows, list) or not rows:
        raise ValidationError(f"{where}.matrix: expected a non-empty list of rows")
    matrix = np.array([
        [_parse_complex(x, f"{where}.matrix[{i}][{j}]") for j, x in enumerate(row)]
        for i, row in enumerate(rows)
    ])
    return eigendecompose(matrix, tol)


def _parse_curve(node, where: str) -> DiscreteCurve:
    if not isinstance(node, dict) or "samples" not in node:
        raise ValidationError(f'{where}: a curve is {{"samples": [...], "closed": true}}')
    samples = node["samples"]
    if not isinstance(samples, list) or len(samples) < 3:
        raise ValidationError(f"{where}.samples: need at least three states")
    states = [_parse_state(s, f"{where}.samples[{k}]") for k, s in enumerate(samples)]
    params = None
    if "params" in node and node["params"] is not None:
        params = np.asarray(node["params"], dtype=float)
    return DiscreteCurve(samples=np.array(states), closed=bool(node.get("closed", True)), params=params)


def _load_input(path: Path) -> dict:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read input file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: top level must be a JSON object")
    return data


def _digest_bytes(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def _phase_record(result: PhaseResult) -> dict:
    return {
        "gamma": float(result.gamma),
        "method": result.method,
        "estimated_error": float(result.estimated_error),
        "winding": int(result.winding),
    }


def _tolerance_record(tol: ToleranceConfig) -> dict:
    return {"eq_tol": tol.eq_tol, "null_tol": tol.null_tol, "fd_step": tol.fd_step}


def _report_path(job: JobSpec) -> Path:
    # metric-grid owns the output path for its CSV table; its JSON report
    # goes next to it.
    if job.command == "metric-grid":
        return Path(str(job.output_path) + ".json")
    return job.output_path


def _write_report(job: JobSpec, digest: str, results: list, errors: list[str]) -> None:
    report = {
        "command": job.command,
        "inputs_digest": digest,
        "results": results,
        "errors": errors,
        "tolerances": _tolerance_record(job.tol),
        "versions": {"obsphase": __version__, "numpy": np.__version__},
    }
    target = _report_path(job)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _run_classify(job: JobSpec, data: dict) -> list:
    obs = _parse_observable(data.get("observable"), "observable", job.tol)
    psi = _parse_state(data.get("state"), "state")
    result = classify(psi, obs, job.tol)
    return [{"tag": result.tag.value, "raw_value": float(result.raw_value)}]


def _run_phase(job: JobSpec, data: dict) -> list:
    obs = _parse_observable(data.get("observable"), "observable", job.tol)
    curve = _parse_curve(data.get("curve"), "curve")
    result = loop_phase(curve, obs, job.tol)
    record = _phase_record(result)
    record["num_samples"] = curve.num_samples
    return [record]


def _run_triangle(job: JobSpec, data: dict) -> list:
    obs = _parse_observable(data.get("observable"), "observable", job.tol)
    states = data.get("states")
    if not isinstance(states, list) or len(states) != 3:
        raise ValidationError('triangle input needs "states": [s1, s2, s3]')
    rays = [ray_from_vector(_parse_state(s, f"states[{k}]"), obs, job.tol)
            for k, s in enumerate(states)]
    result = three_point_phase(rays[0], rays[1], rays[2], obs, job.tol)
    return [_phase_record(result)]


def _run_metric_grid(job: JobSpec, data: dict) -> list:
    theta_range = data.get("theta_range", [0.05, 3.0])
    phi_range = data.get("phi_range", [0.0, 2.0 * np.pi])
    for name, rng in (("theta_range", theta_range), ("phi_range", phi_range)):
        if (not isinstance(rng, list) or len(rng) != 2
                or not all(isinstance(x, (int, float)) for x in rng)):
            raise ValidationError(f"{name} must be [min, max]")
    if job.resolution < 2:
        raise ValidationError("metric-grid needs resolution >= 2")
    thetas = np.linspace(theta_range[0], theta_range[1], job.resolution)
    phis = np.linspace(phi_range[0], phi_range[1], job.resolution)
    rows = []
    flagged = []
    for i, theta in enumerate(thetas):
        for j, phi in enumerate(phis):
            try:
                chart = two_state_chart(float(theta), float(phi), job.sign, job.tol)
                z = complex(chart.z[0])
                row = [float(theta), float(phi), z.real, z.imag,
                       kahler_potential(chart, job.tol),
                       float(metric_coeffs(chart, job.tol)[0, 0].real),
                       float(form_coeffs(chart, job.tol)[0, 0].imag)]
            except NumericalDomainError:
                row = [float(theta), float(phi)] + [float("nan")] * 5
                flagged.append([i, j])
            rows.append(row)
    job.output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(job.output_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(_CSV_HEADER)
        for row in rows:
            writer.writerow([repr(v) for v in row])
    return [{
        "sign": job.sign,
        "resolution": job.resolution,
        "rows": len(rows),
        "flagged": flagged,
        "csv_path": str(job.output_path),
    }]


def _run_stokes(job: JobSpec, data: dict) -> list:
    obs = _parse_observable(data.get("observable"), "observable", job.tol)
    surface = data.get("surface")
    if not isinstance(surface, dict) or "name" not in surface:
        raise ValidationError('stokes input needs "surface": {"name": ...}')
    params = {k: v for k, v in surface.items() if k != "name"}
    generator = surface_by_name(surface["name"], **params)
    if job.resolution < 8:
        raise ValidationError("stokes needs resolution >= 8")
    resolutions = sorted({max(8, job.resolution // 4), max(8, job.resolution // 2), job.resolution})
    conv = stokes_convergence(generator, obs, resolutions, job.tol)
    return [{
        "surface": surface["name"],
        "resolutions": list(conv.resolutions),
        "reports": [
            {"resolution": m, "loop": _phase_record(rep.loop),
             "surface": _phase_record(rep.surface), "gap": float(rep.gap)}
            for m, rep in zip(conv.resolutions, conv.reports)
        ],
        "orders": list(conv.orders),
    }]


def _run_verify(job: JobSpec) -> tuple[list, bool]:
    report = run_verification(seed=job.seed, tol=job.tol)
    return [report], report["all_passed"]


def run(job: JobSpec) -> int:
    """Execute a job, write its report, and return the exit code."""
    digest_source: bytes
    if job.input_path is not None:
        try:
            digest_source = job.input_path.read_bytes()
        except OSError as exc:
            _write_report(job, "", [], [f"cannot read input file {job.input_path}: {exc}"])
            print(f"error: cannot read input file {job.input_path}: {exc}", file=sys.stderr)
            return 2
    else:
        digest_source = json.dumps(
            {"command": job.command, "seed": job.seed, "resolution": job.resolution, "sign": job.sign},
            sort_keys=True).encode("utf-8")
    digest = _digest_bytes(digest_source)

    try:
        verify_failed = False
        if job.command == "verify":
            results, all_passed = _run_verify(job)
            verify_failed = not all_passed
        else:
            data = _load_input(job.input_path) if job.input_path is not None else {}
            if job.command == "classify":
                results = _run_classify(job, data)
            elif job.command == "phase":
                results = _run_phase(job, data)
            elif job.command == "triangle":
                results = _run_triangle(job, data)
            elif job.command == "metric-grid":
                results = _run_metric_grid(job, data)
            else:
                results = _run_stokes(job, data)
    except ObsPhaseError as exc:
        _write_report(job, digest, [], [f"{type(exc).__name__}: {exc}"])
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code

    _write_report(job, digest, results, [])
    return 4 if verify_failed else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="obsphase",
        description="Observable-weighted geometric phases and ray-space geometry.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    needs_input = {
        "classify": "classify a state by the sign of (psi, O psi)",
        "phase": "holonomy of a closed sampled curve",
        "triangle": "three-ray phase invariant",
        "stokes": "compare boundary holonomy with the surface integral",
    }
    optional_input = {
        "metric-grid": "tabulate the two-state potential, metric and form over (theta, phi)",
        "verify": "run the seeded self-verification suites",
    }
    for name, help_text in {**needs_input, **optional_input}.items():
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--input", type=Path, required=name in needs_input,
                         help="JSON input file")
        cmd.add_argument("--output", type=Path, required=True,
                         help="report path (CSV table for metric-grid; report lands next to it)")
        cmd.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized suites")
        cmd.add_argument("--eq-tol", type=float, default=DEFAULT_TOL.eq_tol)
        cmd.add_argument("--null-tol", type=float, default=DEFAULT_TOL.null_tol)
        cmd.add_argument("--fd-step", type=float, default=DEFAULT_TOL.fd_step)
        cmd.add_argument("--resolution", type=int, default=64,
                         help="grid resolution (metric-grid, stokes)")
        cmd.add_argument("--sign", type=int, choices=(1, -1), default=1,
                         help="which signed ray space metric-grid tabulates")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        tol = ToleranceConfig(eq_tol=args.eq_tol, null_tol=args.null_tol, fd_step=args.fd_step)
        job = JobSpec(
            command=args.command,
            input_path=args.input,
            output_path=args.output,
            tol=tol,
            seed=args.seed,
            resolution=args.resolution,
            sign=args.sign,
        )
    except ObsPhaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(job)


if __name__ == "__main__":
    sys.exit(main())
