"""Seeded self-verification suites.

Each suite checks one identity or convergence property of the package at
desk scale and reports the worst deviation it saw.  The command line front
end runs all of them with a fixed seed and emits the results as JSON; given
the same seed the report is reproduced byte for byte.
"""

from __future__ import annotations

import numpy as np

from .classify import normalize_o, ray_from_vector, ray_of
from .connection import horizontal_project
from .core import (
    DEFAULT_TOL,
    Observable,
    ToleranceConfig,
    angle_distance,
    eigendecompose,
    identity_observable,
    o_inner,
    o_norm,
)
from .curves import (
    bloch_octant,
    bloch_state,
    geodesic_polygon,
    hyperboloid_cap,
    hyperboloid_loop,
    sample_loop,
)
from .holonomy import DiscreteCurve, discrete_pancharatnam, gauge_transform, loop_phase, three_point_phase
from .kahler import (
    KahlerChart,
    chart_loop_phase,
    form_coeffs,
    kahler_potential,
    metric_coeffs,
    potential_hessian_fd,
)
from .raygeom import metric, ray_distance_sq, ray_tangent, symplectic_form, trace_split
from .surface import SurfaceMesh, stokes_convergence, surface_phase

__all__ = [
    "DEFAULT_SEED",
    "run_verification",
    "random_observable",
    "random_state",
    "random_normalized",
    "random_horizontal",
    "random_closed_curve",
    "random_periodic_gauge",
]

DEFAULT_SEED = 12345

_HYPERBOLOID = eigendecompose(np.diag([1.0, -1.0]))


def random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)


def random_observable(rng: np.random.Generator, n: int, tol: ToleranceConfig = DEFAULT_TOL) -> Observable:
    """Random Hermitian observable with spectrum spread on both signs."""
    while True:
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        m = (a + a.conj().T) / 2.0
        obs = eigendecompose(m, tol)
        if obs.eigenvalues[0] < -0.1 and obs.eigenvalues[-1] > 0.1:
            return obs


def random_normalized(rng: np.random.Generator, observable: Observable, sign: int,
                      tol: ToleranceConfig = DEFAULT_TOL):
    """A random state normalized onto the quadric of the requested sign."""
    n = observable.dim
    scale = float(np.max(np.abs(observable.eigenvalues)))
    while True:
        psi = random_state(rng, n)
        raw = o_norm(psi, observable, tol)
        if sign * raw > 0.05 * scale * float(np.vdot(psi, psi).real):
            return normalize_o(psi, observable, tol)


def random_horizontal(rng: np.random.Generator, state, observable: Observable) -> np.ndarray:
    """A random horizontal vector at the state, scaled to unit plain norm."""
    chi = horizontal_project(state, random_state(rng, state.dim), observable)
    norm = float(np.linalg.norm(chi))
    if norm < 1e-8:
        return random_horizontal(rng, state, observable)
    return chi / norm


def random_closed_curve(rng: np.random.Generator, observable: Observable, k: int, sign: int,
                        tol: ToleranceConfig = DEFAULT_TOL) -> DiscreteCurve:
    """Random smooth closed curve staying strictly on one side of the cone.

    Built as a fixed anchor state plus a three-mode trigonometric wobble; the
    wobble amplitude is halved until every sample keeps the requested sign
    with a safe margin.
    """
    n = observable.dim
    anchor = random_normalized(rng, observable, sign, tol).psi
    waves = (rng.standard_normal((6, n)) + 1j * rng.standard_normal((6, n))) / np.sqrt(2.0 * n)
    s = np.linspace(0.0, 2.0 * np.pi, k)
    basis = np.stack([np.cos(s), np.sin(s), np.cos(2 * s), np.sin(2 * s), np.cos(3 * s), np.sin(3 * s)])
    amplitude = 0.25
    for _ in range(40):
        samples = anchor[None, :] + amplitude * (basis.T @ waves)
        samples[-1] = samples[0]
        raw = np.einsum("ki,ij,kj->k", samples.conj(), observable.matrix, samples).real
        norm_sq = np.einsum("ki,ki->k", samples.conj(), samples).real
        if np.all(sign * raw / norm_sq > 100.0 * tol.null_tol):
            return DiscreteCurve(samples=samples, closed=True, params=s)
        amplitude /= 2.0
    raise RuntimeError("could not place a closed curve away from the null cone")


def random_periodic_gauge(rng: np.random.Generator, k: int) -> np.ndarray:
    s = np.linspace(0.0, 2.0 * np.pi, k)
    coeffs = rng.uniform(-1.0, 1.0, size=6)
    lam = (coeffs[0] * np.cos(s) + coeffs[1] * np.sin(s)
           + coeffs[2] * np.cos(2 * s) + coeffs[3] * np.sin(2 * s)
           + coeffs[4] * np.cos(3 * s) + coeffs[5] * np.sin(3 * s))
    lam[-1] = lam[0]
    return lam


def _suite(name: str, count: int, max_error: float, tolerance: float, **details) -> dict:
    record = {
        "name": name,
        "count": int(count),
        "max_error": float(max_error),
        "tolerance": float(tolerance),
        "passed": bool(max_error < tolerance),
    }
    if details:
        record["details"] = details
    return record


def _three_point_suite(rng: np.random.Generator, tol: ToleranceConfig, count: int = 500) -> dict:
    """Trace path of the three-ray invariant against the raw overlap product.

    The two arguments coincide exactly when the product of the three
    observable averages is positive, so the sampler conditions on that; the
    complementary configurations are shifted by pi and checked too.
    """
    worst = 0.0
    worst_shifted = 0.0
    for _ in range(count):
        n = int(rng.integers(2, 9))
        obs = random_observable(rng, n, tol)
        scale = float(np.max(np.abs(obs.eigenvalues)))
        states = []
        averages = []
        while len(states) < 3:
            psi = random_state(rng, n)
            raw = o_norm(psi, obs, tol)
            if abs(raw) > 0.05 * scale * float(np.vdot(psi, psi).real):
                states.append(psi)
                averages.append(raw)
            if len(states) == 3 and averages[0] * averages[1] * averages[2] < 0.0:
                # Shifted branch: the trace value and the bare product differ
                # by exactly pi.  Record the check, then resample.
                rays = [ray_from_vector(p, obs, tol) for p in states]
                gamma = three_point_phase(rays[0], rays[1], rays[2], obs, tol).gamma
                product = (o_inner(states[0], obs, states[1]) * o_inner(states[1], obs, states[2])
                           * o_inner(states[2], obs, states[0]))
                worst_shifted = max(worst_shifted, angle_distance(gamma, np.angle(product) + np.pi))
                states, averages = [], []
        rays = [ray_from_vector(p, obs, tol) for p in states]
        gamma = three_point_phase(rays[0], rays[1], rays[2], obs, tol).gamma
        product = (o_inner(states[0], obs, states[1]) * o_inner(states[1], obs, states[2])
                   * o_inner(states[2], obs, states[0]))
        worst = max(worst, angle_distance(gamma, float(np.angle(product))))
    return _suite("three_point_trace_identity", count, max(worst, worst_shifted), 1e-12,
                  positive_branch_error=float(worst), shifted_branch_error=float(worst_shifted))


def _gauge_invariance_suite(rng: np.random.Generator, tol: ToleranceConfig,
                            count: int = 100, k: int = 400) -> dict:
    worst = 0.0
    for _ in range(count):
        n = int(rng.integers(2, 9))
        obs = random_observable(rng, n, tol)
        sign = int(rng.choice([1, -1]))
        curve = random_closed_curve(rng, obs, k, sign, tol)
        lam = random_periodic_gauge(rng, k)
        before = loop_phase(curve, obs, tol).gamma
        after = loop_phase(gauge_transform(curve, lam, tol), obs, tol).gamma
        worst = max(worst, angle_distance(before, after))
    return _suite("gauge_invariance", count, worst, 1e-8)


def _stokes_suite(tol: ToleranceConfig) -> dict:
    resolutions = (16, 32, 64)
    cases = {
        "hyperboloid_cap": (hyperboloid_cap(0.8), _HYPERBOLOID),
        "bloch_octant": (bloch_octant(), identity_observable(2)),
    }
    details = {}
    worst_gap = 0.0
    min_order = float("inf")
    for name, (gen, obs) in cases.items():
        conv = stokes_convergence(gen, obs, resolutions, tol)
        details[name] = {
            "gaps": [float(r.gap) for r in conv.reports],
            "orders": [float(o) for o in conv.orders],
        }
        worst_gap = max(worst_gap, conv.reports[-1].gap)
        min_order = min(min_order, min(conv.orders))
    record = _suite("stokes_equivalence", len(cases), worst_gap, 1e-3, **details)
    record["min_order"] = float(min_order)
    record["passed"] = bool(record["passed"] and min_order >= 1.8)
    return record


def _identity_reduction_suite(tol: ToleranceConfig) -> dict:
    eye = identity_observable(2)
    z_pole = bloch_state(0.0, 0.0)
    plus_y = bloch_state(np.pi / 2.0, np.pi / 2.0)
    plus_x = bloch_state(np.pi / 2.0, 0.0)
    triangle = geodesic_polygon([z_pole, plus_y, plus_x], samples_per_edge=200)
    gamma_loop = loop_phase(triangle, eye, tol).gamma
    loop_error = angle_distance(gamma_loop, -np.pi / 4.0)
    rays = [ray_from_vector(v, eye, tol) for v in (z_pole, plus_y, plus_x)]
    gamma_three = three_point_phase(rays[0], rays[1], rays[2], eye, tol).gamma
    three_error = angle_distance(gamma_three, -np.pi / 4.0)
    record = _suite("identity_reduction_octant", 2, loop_error, 1e-4,
                    loop_gamma=float(gamma_loop), three_point_gamma=float(gamma_three),
                    three_point_error=float(three_error))
    record["passed"] = bool(loop_error < 1e-4 and three_error < 1e-12)
    return record


def _random_chart(rng: np.random.Generator, sign: int, tol: ToleranceConfig) -> KahlerChart:
    while True:
        n = int(rng.integers(2, 7))
        lam = rng.uniform(0.2, 2.0, size=n) * rng.choice([1.0, -1.0], size=n)
        z = (rng.standard_normal(n - 1) + 1j * rng.standard_normal(n - 1)) * 0.6
        q = float(np.sum(lam[:-1] * np.abs(z) ** 2) + lam[-1])
        if sign * q > 0.3:
            return KahlerChart(z=z, eigenvalues=lam, sign=sign)


def _kahler_fd_suite(rng: np.random.Generator, tol: ToleranceConfig, count: int = 200) -> dict:
    worst_fd = 0.0
    worst_pair = 0.0
    for i in range(count):
        sign = 1 if i % 2 == 0 else -1
        chart = _random_chart(rng, sign, tol)
        g = metric_coeffs(chart, tol)
        f = form_coeffs(chart, tol)
        fd = potential_hessian_fd(chart, tol)
        worst_fd = max(worst_fd, float(np.max(np.abs(g - fd))))
        worst_pair = max(worst_pair, float(np.max(np.abs(g - (-1j) * f))))
    record = _suite("kahler_finite_difference", count, worst_fd, 1e-6,
                    metric_vs_form_error=float(worst_pair))
    record["passed"] = bool(worst_fd < 1e-6 and worst_pair < 1e-14)
    return record


def _two_state_closed_forms_suite(tol: ToleranceConfig) -> dict:
    chart = KahlerChart(z=np.array([2.0 + 0.0j]), eigenvalues=np.array([1.0, -1.0]), sign=1)
    g_error = abs(metric_coeffs(chart, tol)[0, 0] - (-1.0 / 9.0))
    k_error = abs(kahler_potential(chart, tol) - np.log(3.0))
    record = _suite("two_state_closed_forms", 2, max(g_error, k_error), 1e-14,
                    metric_error=float(g_error), potential_error=float(k_error))
    return record


def _trace_split_suite(rng: np.random.Generator, tol: ToleranceConfig, count: int = 500) -> dict:
    worst = 0.0
    for _ in range(count):
        n = int(rng.integers(2, 9))
        obs = random_observable(rng, n, tol)
        sign = int(rng.choice([1, -1]))
        state = random_normalized(rng, obs, sign, tol)
        chi1 = random_horizontal(rng, state, obs)
        chi2 = random_horizontal(rng, state, obs)
        b1 = ray_tangent(state, chi1, obs, tol)
        b2 = ray_tangent(state, chi2, obs, tol)
        value = trace_split(ray_of(state), b1, b2, obs, tol)
        worst = max(worst, abs(value.real - metric(b1, b2, obs, tol)))
        worst = max(worst, abs(value.imag - 0.5 * symplectic_form(b1, b2, obs, tol)))
        worst = max(worst, abs(value - o_inner(chi1, obs, chi2)))
    return _suite("trace_split_identity", count, worst, 1e-12)


def _distance_suite(rng: np.random.Generator, tol: ToleranceConfig, count: int = 500) -> dict:
    worst = 0.0
    for _ in range(count):
        n = int(rng.integers(2, 9))
        obs = random_observable(rng, n, tol)
        sign = int(rng.choice([1, -1]))
        s1 = random_normalized(rng, obs, sign, tol)
        s2 = random_normalized(rng, obs, sign, tol)
        d = ray_distance_sq(ray_of(s1), ray_of(s2), obs, tol)
        oracle = 1.0 - abs(o_inner(s1.psi, obs, s2.psi)) ** 2
        worst = max(worst, abs(d - oracle))
    t = 0.5
    s1 = normalize_o(np.array([1.0, 0.0]), _HYPERBOLOID, tol)
    s2 = normalize_o(np.array([np.cosh(t), np.sinh(t)]), _HYPERBOLOID, tol)
    d_two_state = ray_distance_sq(ray_of(s1), ray_of(s2), _HYPERBOLOID, tol)
    two_state_error = abs(d_two_state - (1.0 - np.cosh(t) ** 2))
    record = _suite("distance_identity", count, max(worst, two_state_error), 1e-12,
                    two_state_value=float(d_two_state))
    record["passed"] = bool(record["passed"] and d_two_state < 0.0)
    return record


def _cross_method_suite(tol: ToleranceConfig) -> dict:
    r = 0.8
    k = 1000
    m = 64
    curve = sample_loop(hyperboloid_loop(r), k)
    obs = _HYPERBOLOID
    results = {
        "loop_integral": loop_phase(curve, obs, tol),
        "discrete_product": discrete_pancharatnam(
            [normalize_o(psi, obs, tol) for psi in curve.samples[:-1]], obs, tol),
        "chart_loop_integral": chart_loop_phase(curve, obs, tol),
        "surface_integral": surface_phase(SurfaceMesh(hyperboloid_cap(r), m), obs, tol),
    }
    names = list(results)
    worst = 0.0
    passed = True
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            gap = angle_distance(results[a].gamma, results[b].gamma)
            allowed = max(results[a].estimated_error, results[b].estimated_error, 1e-3)
            worst = max(worst, gap)
            passed = passed and gap <= allowed
    details = {name: {"gamma": float(res.gamma), "estimated_error": float(res.estimated_error)}
               for name, res in results.items()}
    record = _suite("cross_method_agreement", len(names), worst, 1e-3, **details)
    record["passed"] = bool(passed)
    return record


def run_verification(seed: int = DEFAULT_SEED, tol: ToleranceConfig = DEFAULT_TOL) -> dict:
    """Run every suite with independent deterministic substreams of ``seed``."""
    root = np.random.SeedSequence(seed)
    streams = root.spawn(8)
    suites = [
        _three_point_suite(np.random.default_rng(streams[0]), tol),
        _gauge_invariance_suite(np.random.default_rng(streams[1]), tol),
        _stokes_suite(tol),
        _identity_reduction_suite(tol),
        _kahler_fd_suite(np.random.default_rng(streams[2]), tol),
        _two_state_closed_forms_suite(tol),
        _trace_split_suite(np.random.default_rng(streams[3]), tol),
        _distance_suite(np.random.default_rng(streams[4]), tol),
        _cross_method_suite(tol),
    ]
    return {
        "seed": int(seed),
        "suites": suites,
        "all_passed": bool(all(s["passed"] for s in suites)),
    }
