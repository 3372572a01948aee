"""Geometric phases of discrete closed curves and point cycles.

The loop phase is accumulated with the overlap-product rule: after scaling
every sample onto its unit quadric, each segment contributes

    Arg[ (psi_k, O psi_{k+1}) / (psi_k, O psi_k) ],

and the segments are summed around the cycle, wrap-around pair included.
Dividing by (psi_k, O psi_k) = +-1 keeps one code path for both quadrics: on
the negative one a bare overlap sits near -1 and its argument would pick up a
spurious pi per segment.  The rule is exactly invariant under any per-sample
phase change (each sample enters once conjugated and once plain), second
order accurate in the sample spacing, and needs no derivative estimates.

Phases are reported on the principal branch (-pi, pi] together with the
winding count of the raw accumulated sum, since the branch choice beyond one
turn is a convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .classify import NormalizedState, RayPoint
from .core import (
    DEFAULT_TOL,
    DegenerateOverlapError,
    DimensionMismatchError,
    NullStateError,
    NumericalDomainError,
    Observable,
    ToleranceConfig,
    ValidationError,
    principal_angle,
)

__all__ = [
    "PhaseResult",
    "DiscreteCurve",
    "loop_phase",
    "discrete_pancharatnam",
    "three_point_phase",
    "gauge_transform",
]

# Relative tolerance for the closed-curve endpoint collinearity check.
_CLOSURE_TOL = 1e-7


@dataclass(frozen=True)
class PhaseResult:
    """A computed phase with its provenance.

    gamma
        Principal value in (-pi, pi].
    method
        Which evaluation path produced the number: ``loop_integral``,
        ``discrete_product``, ``three_point``, ``surface_integral`` or
        ``chart_loop_integral``.
    estimated_error
        One-step Richardson estimate where the method discretizes something
        continuous, 0.0 where the value is exact in the inputs.
    winding
        Number of full turns folded away by the branch reduction.
    """

    gamma: float
    method: str
    estimated_error: float
    winding: int = 0

    def __post_init__(self) -> None:
        if not np.isfinite(self.gamma):
            raise NumericalDomainError("phase is not finite")


@dataclass(frozen=True)
class DiscreteCurve:
    """An ordered sampling of a curve in state space.

    For a closed curve the first and last samples must lie on the same ray;
    they may differ by a phase, which the cyclic product rule compensates
    exactly.  Parameters default to a uniform grid on [0, 1].
    """

    samples: np.ndarray
    closed: bool = True
    params: np.ndarray | None = None

    def __post_init__(self) -> None:
        samples = np.array(np.asarray(self.samples, dtype=complex), copy=True)
        if samples.ndim != 2 or samples.shape[0] < 3 or samples.shape[1] < 2:
            raise ValidationError(f"expected at least 3 samples of dimension >= 2, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise ValidationError("curve samples contain non-finite entries")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if self.params is None:
            params = np.linspace(0.0, 1.0, samples.shape[0])
        else:
            params = np.array(np.asarray(self.params, dtype=float), copy=True)
        if params.shape != (samples.shape[0],):
            raise ValidationError("params must have one value per sample")
        if np.any(np.diff(params) <= 0.0):
            raise ValidationError("params must be strictly increasing")
        params.setflags(write=False)
        object.__setattr__(self, "params", params)
        if self.closed:
            first, last = samples[0], samples[-1]
            overlap = abs(np.vdot(first, last)) ** 2
            scale = float(np.vdot(first, first).real * np.vdot(last, last).real)
            if scale == 0.0 or 1.0 - overlap / scale > _CLOSURE_TOL:
                raise ValidationError("closed curve endpoints do not lie on the same ray")

    @property
    def num_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    def reversed(self) -> "DiscreteCurve":
        """The same curve traversed backwards."""
        p = self.params
        return DiscreteCurve(self.samples[::-1], closed=self.closed, params=p[0] + p[-1] - p[::-1])


def _batched_quadratic_form(samples: np.ndarray, observable: Observable,
                            tol: ToleranceConfig) -> np.ndarray:
    raw = np.einsum("ki,ij,kj->k", samples.conj(), observable.matrix, samples)
    bad = np.abs(raw.imag) > tol.eq_tol * np.maximum(1.0, np.abs(raw.real))
    if np.any(bad):
        raise ValidationError("(psi, O psi) acquired an imaginary part; observable is corrupt")
    return raw.real


def _normalize_batch(samples: np.ndarray, observable: Observable,
                     tol: ToleranceConfig) -> tuple[np.ndarray, int]:
    """Scale every sample onto its quadric; all must share one sign."""
    if samples.shape[1] != observable.dim:
        raise DimensionMismatchError(
            f"curve dimension {samples.shape[1]} does not match observable dimension {observable.dim}"
        )
    norm_sq = np.einsum("ki,ki->k", samples.conj(), samples).real
    if np.any(norm_sq == 0.0):
        raise ValidationError("curve contains a zero sample")
    raw = _batched_quadratic_form(samples, observable, tol)
    average = raw / norm_sq
    null_idx = np.nonzero(np.abs(average) <= tol.null_tol)[0]
    if null_idx.size:
        raise NullStateError(f"sample {int(null_idx[0])} lies on the null cone, phase undefined there")
    signs = np.sign(average)
    if signs.max() != signs.min():
        raise ValidationError("curve crosses the null cone: samples classify to both signs")
    normalized = samples / np.sqrt(np.abs(raw))[:, None]
    return normalized, int(signs[0])


def _cyclic_segment_args(normalized: np.ndarray, sign: int, observable: Observable,
                         tol: ToleranceConfig) -> np.ndarray:
    """Per-segment phase contributions around the cycle, wrap pair included."""
    nxt = np.roll(normalized, -1, axis=0)
    overlaps = np.einsum("ki,ij,kj->k", normalized.conj(), observable.matrix, nxt)
    small = np.abs(overlaps) <= tol.null_tol
    if np.any(small):
        k = int(np.nonzero(small)[0][0])
        raise DegenerateOverlapError(f"overlap between samples {k} and {(k + 1) % len(overlaps)} vanishes")
    return np.angle(sign * overlaps)


def _wrap_result(raw: float, method: str, estimated_error: float) -> PhaseResult:
    gamma = principal_angle(raw)
    winding = int(round((raw - gamma) / (2.0 * np.pi)))
    return PhaseResult(gamma=gamma, method=method, estimated_error=estimated_error, winding=winding)


def loop_phase(curve: DiscreteCurve, observable: Observable,
               tol: ToleranceConfig = DEFAULT_TOL) -> PhaseResult:
    """Holonomy of the connection along a closed sampled curve.

    Every sample is scaled onto its quadric first, then the cyclic
    overlap-product rule accumulates the phase.  The error estimate comes
    from one Richardson step against the half-resolution subsampling.

    Raises
    ------
    ValidationError
        For an open curve or one whose samples classify to both signs.
    NullStateError
        If any sample lies on the null cone.
    DegenerateOverlapError
        If consecutive samples are too far apart for their overlap to carry
        a phase.
    """
    if not curve.closed:
        raise ValidationError("loop phase is defined for closed curves only")
    normalized, sign = _normalize_batch(curve.samples, observable, tol)
    raw = float(np.sum(_cyclic_segment_args(normalized, sign, observable, tol)))
    estimated_error = np.pi
    if curve.num_samples >= 6:
        try:
            half = float(np.sum(_cyclic_segment_args(normalized[::2], sign, observable, tol)))
            estimated_error = abs(principal_angle(raw - half))
        except DegenerateOverlapError:
            pass
    return _wrap_result(raw, "loop_integral", estimated_error)


def discrete_pancharatnam(points: Sequence[NormalizedState], observable: Observable,
                          tol: ToleranceConfig = DEFAULT_TOL) -> PhaseResult:
    """Cyclic overlap-product phase of a finite list of normalized states.

    The value is gauge invariant (any representative of each ray gives the
    same answer) and exact in the inputs, so the estimated error is zero.
    For three points it equals the three-ray phase; for dense samplings of a
    smooth closed curve it converges to :func:`loop_phase` at second order.
    """
    if len(points) < 2:
        raise ValidationError("need at least two points")
    signs = {p.sign for p in points}
    if len(signs) != 1:
        raise ValidationError("all points must lie on the same quadric")
    dims = {p.dim for p in points}
    if dims != {observable.dim}:
        raise DimensionMismatchError("point dimensions do not match the observable")
    stack = np.stack([p.psi for p in points])
    args = _cyclic_segment_args(stack, points[0].sign, observable, tol)
    return _wrap_result(float(np.sum(args)), "discrete_product", 0.0)


def three_point_phase(r1: RayPoint, r2: RayPoint, r3: RayPoint, observable: Observable,
                      tol: ToleranceConfig = DEFAULT_TOL) -> PhaseResult:
    """Three-ray phase invariant

        Arg Tr[ rho1 O rho2 O rho3 O / (<O>_1 <O>_2 <O>_3) ],

    with <O>_j = Tr(rho_j O).  Invariant under independent positive
    rescalings of each rho_j and under any phase choice of representative
    vectors; evaluated entirely from the ray matrices.

    Raises
    ------
    NumericalDomainError
        If some <O>_j vanishes, where the invariant is undefined.
    DegenerateOverlapError
        If the trace itself vanishes and carries no argument.
    """
    rays = (r1, r2, r3)
    for r in rays:
        if r.dim != observable.dim:
            raise DimensionMismatchError("ray dimension does not match the observable")
    # Work with trace-normalized matrices so thresholds are scale free.
    traces = [r.trace for r in rays]
    if min(traces) <= 0.0:
        raise ValidationError("ray matrices must have positive trace")
    rhos = [r.rho / t for r, t in zip(rays, traces)]
    averages = [float(np.trace(rho @ observable.matrix).real) for rho in rhos]
    for j, avg in enumerate(averages):
        if abs(avg) <= tol.null_tol:
            raise NumericalDomainError(f"<O> vanishes for ray {j + 1}, three-point phase undefined")
    product = complex(np.trace(rhos[0] @ observable.matrix @ rhos[1] @ observable.matrix
                               @ rhos[2] @ observable.matrix))
    value = product / (averages[0] * averages[1] * averages[2])
    if abs(value) <= tol.null_tol:
        raise DegenerateOverlapError("trace of the three-ray product vanishes, argument undefined")
    return PhaseResult(gamma=float(np.angle(value)), method="three_point", estimated_error=0.0)


def gauge_transform(curve: DiscreteCurve, lam, tol: ToleranceConfig = DEFAULT_TOL) -> DiscreteCurve:
    """Apply a local phase change psi_k -> exp(i lambda_k) psi_k.

    ``lam`` must take equal values at the two ends of the parameter range so
    that closed curves stay closed; the loop phase of the result equals the
    loop phase of the input.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (curve.num_samples,):
        raise ValidationError("need one gauge angle per curve sample")
    if abs(lam[0] - lam[-1]) > tol.eq_tol:
        raise ValidationError(f"gauge function must be periodic, got ends {lam[0]!r} and {lam[-1]!r}")
    samples = curve.samples * np.exp(1j * lam)[:, None]
    return DiscreteCurve(samples=samples, closed=curve.closed, params=curve.params)
