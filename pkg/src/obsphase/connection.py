"""Connection, tangent decomposition, and local charts on the unit quadrics.

At a state psi with (psi, O psi) = sign, a tangent vector phi satisfies
Re(psi, O phi) = 0.  The connection functional is

    A(phi) = sign * Im(psi, O phi),

so that the purely vertical direction i*psi always has connection value 1 on
both quadrics.  Horizontal vectors are tangent vectors with (psi, O phi) = 0;
every tangent vector splits uniquely as i*a*psi + chi with chi horizontal.

Tangency and horizontality are validated, never silently projected: callers
that hold an arbitrary vector can use :func:`horizontal_project` explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classify import NormalizedState
from .core import (
    DEFAULT_TOL,
    ChartDomainError,
    DimensionMismatchError,
    Observable,
    ToleranceConfig,
    ValidationError,
    as_state,
    o_inner,
    o_norm,
)

__all__ = [
    "TangentSplit",
    "ChartPoint",
    "is_tangent",
    "is_horizontal",
    "horizontal_project",
    "connection",
    "split",
    "covariant_derivative",
    "chart_point",
    "chart_variations",
    "chart_state",
]


@dataclass(frozen=True)
class TangentSplit:
    """Vertical coefficient and horizontal part of a tangent vector.

    The original vector is recovered as ``i * a * psi + chi``.
    """

    a: float
    chi: np.ndarray


@dataclass(frozen=True)
class ChartPoint:
    """Coordinates (chi0, alpha) of a state in the chart centered at psi0.

    The represented state is ``exp(i alpha) * (c psi0 + chi0)`` where chi0 is
    horizontal at psi0 and c is fixed by requiring the state to stay on the
    same quadric as psi0.
    """

    psi0: NormalizedState
    chi0: np.ndarray
    alpha: float


def _check_dims(state: NormalizedState, vec: np.ndarray, observable: Observable) -> None:
    if state.dim != observable.dim or vec.size != observable.dim:
        raise DimensionMismatchError(
            f"dimensions disagree: state {state.dim}, vector {vec.size}, observable {observable.dim}"
        )


def _check_normalized(state: NormalizedState, observable: Observable, tol: ToleranceConfig) -> None:
    value = o_norm(state.psi, observable, tol)
    if abs(value - state.sign) > 100.0 * tol.eq_tol:
        raise ValidationError(
            f"state is not normalized to its quadric: (psi, O psi) = {value:.12g}, expected {state.sign}"
        )


def is_tangent(state: NormalizedState, phi, observable: Observable, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when Re(psi, O phi) vanishes within ``eq_tol``."""
    phi = as_state(phi)
    _check_dims(state, phi, observable)
    return abs(o_inner(state.psi, observable, phi).real) <= tol.eq_tol


def is_horizontal(state: NormalizedState, chi, observable: Observable, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when (psi, O chi) vanishes entirely within ``eq_tol``."""
    chi = as_state(chi)
    _check_dims(state, chi, observable)
    return abs(o_inner(state.psi, observable, chi)) <= tol.eq_tol


def horizontal_project(state: NormalizedState, vec, observable: Observable) -> np.ndarray:
    """Remove the component of ``vec`` along psi in the O-weighted sense.

    The result chi satisfies (psi, O chi) = 0 exactly up to roundoff, using
    (psi, O psi) = sign.
    """
    vec = as_state(vec)
    _check_dims(state, vec, observable)
    overlap = o_inner(state.psi, observable, vec)
    return vec - state.sign * overlap * state.psi


def connection(state: NormalizedState, phi, observable: Observable, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Connection value A(phi) = sign * Im(psi, O phi) of a tangent vector.

    Raises
    ------
    ValidationError
        If ``phi`` is not tangent at the state (nonzero Re(psi, O phi)).
    """
    phi = as_state(phi)
    _check_dims(state, phi, observable)
    _check_normalized(state, observable, tol)
    value = o_inner(state.psi, observable, phi)
    if abs(value.real) > tol.eq_tol:
        raise ValidationError(f"vector is not tangent: Re(psi, O phi) = {value.real:.3e}")
    return state.sign * value.imag


def split(state: NormalizedState, phi, observable: Observable, tol: ToleranceConfig = DEFAULT_TOL) -> TangentSplit:
    """Decompose a tangent vector into vertical and horizontal components.

    Returns ``TangentSplit(a, chi)`` with ``a`` equal to the connection value
    and ``chi = phi - i a psi`` horizontal.
    """
    a = connection(state, phi, observable, tol)
    chi = as_state(phi) - 1j * a * state.psi
    return TangentSplit(a=a, chi=chi)


def covariant_derivative(state: NormalizedState, velocity, observable: Observable,
                         tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Covariant derivative D psi = d psi - i A(d psi) psi along a curve.

    ``velocity`` is the ordinary derivative of the curve at this state; the
    result is the horizontal part of the motion and transforms covariantly
    under smooth phase redefinitions of the curve.
    """
    velocity = as_state(velocity)
    _check_dims(state, velocity, observable)
    a = state.sign * o_inner(state.psi, observable, velocity).imag
    return velocity - 1j * a * state.psi


def chart_point(psi0: NormalizedState, chi0, alpha: float, observable: Observable,
                tol: ToleranceConfig = DEFAULT_TOL) -> NormalizedState:
    """State at chart coordinates (chi0, alpha) around the center psi0.

    Returns ``exp(i alpha) (c psi0 + chi0)`` with
    ``c = sqrt(1 - sign * (chi0, O chi0))``; the sign factor keeps the output
    on the same quadric as psi0 on both the positive and the negative side.
    The quadratic form of chi0 may be negative, in which case c > 1.

    Raises
    ------
    ChartDomainError
        If ``sign * (chi0, O chi0) >= 1``, where the chart ends.
    ValidationError
        If chi0 is not horizontal at psi0.
    """
    chi0 = as_state(chi0)
    _check_dims(psi0, chi0, observable)
    _check_normalized(psi0, observable, tol)
    if not is_horizontal(psi0, chi0, observable, tol):
        raise ValidationError("chart offset chi0 must be horizontal at the chart center")
    q = o_norm(chi0, observable, tol)
    c_sq = 1.0 - psi0.sign * q
    if c_sq <= tol.eq_tol:
        raise ChartDomainError(f"chart coordinate out of range: sign * (chi0, O chi0) = {psi0.sign * q:.6g} >= 1")
    psi = np.exp(1j * alpha) * (np.sqrt(c_sq) * psi0.psi + chi0)
    return NormalizedState(psi=psi, sign=psi0.sign)


def chart_state(cp: ChartPoint, observable: Observable, tol: ToleranceConfig = DEFAULT_TOL) -> NormalizedState:
    """The state represented by a :class:`ChartPoint`."""
    return chart_point(cp.psi0, cp.chi0, cp.alpha, observable, tol)


def chart_variations(cp: ChartPoint, a: float, chi, observable: Observable,
                     tol: ToleranceConfig = DEFAULT_TOL) -> tuple[float, np.ndarray]:
    """First-order chart coordinate rates matching a tangent motion.

    Given a tangent vector ``i a psi + chi`` at the state psi represented by
    ``cp`` (``chi`` horizontal at psi), returns ``(dalpha, dchi0)`` such that
    moving the coordinates to ``(chi0 + eps * dchi0, alpha + eps * dalpha)``
    reproduces ``psi + eps (i a psi + chi)`` to first order in eps:

        dalpha = a - sign * Im(chi0, O chi_t) / c^2
        dchi0  = chi_t + sign * (psi0 / c) Re(chi0, O chi_t)
                       + i * sign / c^2 * Im(chi0, O chi_t) * psi_t

    where chi_t = exp(-i alpha) chi and psi_t = exp(-i alpha) psi absorb the
    chart phase.
    """
    chi = as_state(chi)
    sign = cp.psi0.sign
    state = chart_state(cp, observable, tol)
    if not is_horizontal(state, chi, observable, tol):
        raise ValidationError("variation chi must be horizontal at the represented state")
    chi0 = as_state(cp.chi0)
    q = o_norm(chi0, observable, tol)
    c_sq = 1.0 - sign * q
    if c_sq <= tol.eq_tol:
        raise ChartDomainError("chart coordinate out of range")
    c = np.sqrt(c_sq)
    chi_t = np.exp(-1j * cp.alpha) * chi
    psi_t = c * cp.psi0.psi + chi0
    cross = o_inner(chi0, observable, chi_t)
    dalpha = a - sign * cross.imag / c_sq
    dchi0 = chi_t + (sign * cross.real / c) * cp.psi0.psi + (1j * sign * cross.imag / c_sq) * psi_t
    return float(dalpha), dchi0
