"""Intrinsic geometry of the signed ray spaces.

Tangent vectors at a ray rho = psi psi^dagger are the Hermitian matrices
B = chi psi^dagger + psi chi^dagger built from horizontal vectors chi.  The
symplectic two-form, the indefinite metric, and their complex combination are
all traces of rho, O and two tangent operators; each functional is evaluated
from the trace expression, while the generating horizontal vectors are kept
on the tangent objects so the dual vector-side expressions can be compared
exactly in tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classify import NormalizedState, RayPoint, ray_of
from .connection import is_horizontal
from .core import (
    DEFAULT_TOL,
    DimensionMismatchError,
    Observable,
    ToleranceConfig,
    ValidationError,
    as_state,
)

__all__ = [
    "RayTangent",
    "ray_tangent",
    "symplectic_form",
    "metric",
    "trace_split",
    "ray_distance_sq",
]


@dataclass(frozen=True)
class RayTangent:
    """Tangent operator B = chi psi^dagger + psi chi^dagger at a ray.

    ``chi`` is retained because reconstructing it from B alone is only
    defined up to the vertical ambiguity.
    """

    B: np.ndarray
    base: RayPoint
    chi: np.ndarray

    def __post_init__(self) -> None:
        b = np.array(np.asarray(self.B, dtype=complex), copy=True)
        b.setflags(write=False)
        object.__setattr__(self, "B", b)
        chi = np.array(as_state(self.chi), copy=True)
        chi.setflags(write=False)
        object.__setattr__(self, "chi", chi)


def ray_tangent(state: NormalizedState, chi, observable: Observable,
                tol: ToleranceConfig = DEFAULT_TOL) -> RayTangent:
    """Assemble the ray-space tangent generated by a horizontal vector."""
    chi = as_state(chi)
    if chi.size != state.dim or state.dim != observable.dim:
        raise DimensionMismatchError("dimensions of state, chi and observable disagree")
    if not is_horizontal(state, chi, observable, tol):
        raise ValidationError("chi must be horizontal at the base state")
    b = np.outer(chi, state.psi.conj()) + np.outer(state.psi, chi.conj())
    return RayTangent(B=b, base=ray_of(state), chi=chi)


def _check_common_base(b1: RayTangent, b2: RayTangent, tol: ToleranceConfig) -> RayPoint:
    if b1.base.sign != b2.base.sign:
        raise ValidationError("tangents live on ray spaces of different sign")
    if b1.base.rho.shape != b2.base.rho.shape or np.max(np.abs(b1.base.rho - b2.base.rho)) > tol.eq_tol:
        raise ValidationError("tangents are based at different rays")
    return b1.base


def _real_part(value: complex, tol: ToleranceConfig, what: str) -> float:
    if abs(value.imag) > tol.eq_tol * max(1.0, abs(value.real)):
        raise ValidationError(f"{what} acquired an imaginary part {value.imag:.3e}")
    return value.real


def symplectic_form(b1: RayTangent, b2: RayTangent, observable: Observable,
                    tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Antisymmetric two-form

        omega(B', B'') = -i Tr[ rho O (B' O B'' - B'' O B') O ],

    equal to 2 Im(chi', O chi'') of the generating horizontal vectors.
    """
    base = _check_common_base(b1, b2, tol)
    o = observable.matrix
    m1 = base.rho @ o @ b1.B @ o @ b2.B @ o
    m2 = base.rho @ o @ b2.B @ o @ b1.B @ o
    return _real_part(-1j * (np.trace(m1) - np.trace(m2)), tol, "symplectic form")


def metric(b1: RayTangent, b2: RayTangent, observable: Observable,
           tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Symmetric bilinear form

        g(B', B'') = (1/2) Tr[ rho O (B' O B'' + B'' O B') O ],

    equal to Re(chi', O chi'').  Indefinite: negative values witness the
    pseudo-Riemannian signature.
    """
    base = _check_common_base(b1, b2, tol)
    o = observable.matrix
    m1 = base.rho @ o @ b1.B @ o @ b2.B @ o
    m2 = base.rho @ o @ b2.B @ o @ b1.B @ o
    return _real_part(0.5 * (np.trace(m1) + np.trace(m2)), tol, "metric")


def trace_split(rho: RayPoint, b1: RayTangent, b2: RayTangent, observable: Observable,
                tol: ToleranceConfig = DEFAULT_TOL) -> complex:
    """The transition element Tr[ rho O B' O B'' O ].

    Its real part is the metric and its imaginary part is half the symplectic
    form of the same pair of tangents.
    """
    base = _check_common_base(b1, b2, tol)
    if rho.sign != base.sign or np.max(np.abs(rho.rho - base.rho)) > tol.eq_tol:
        raise ValidationError("rho does not match the base ray of the tangents")
    o = observable.matrix
    return complex(np.trace(rho.rho @ o @ b1.B @ o @ b2.B @ o))


def ray_distance_sq(r1: RayPoint, r2: RayPoint, observable: Observable,
                    tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Squared ray-space distance 1 - Tr(rho1 O rho2 O).

    Defined for rays of quadric-normalized states of one common sign.
    Symmetric in its arguments and possibly negative; no square root is taken
    because the quantity is an indefinite squared distance.
    """
    if r1.sign != r2.sign:
        raise ValidationError("distance is defined within one signed ray space only")
    if r1.dim != r2.dim or r1.dim != observable.dim:
        raise DimensionMismatchError("ray and observable dimensions disagree")
    for j, r in enumerate((r1, r2)):
        avg = float(np.trace(r.rho @ observable.matrix).real)
        if abs(avg - r.sign) > 100.0 * tol.eq_tol:
            raise ValidationError(
                f"ray {j + 1} is not built from a quadric-normalized state: Tr(rho O) = {avg:.12g}"
            )
    overlap = np.trace(r1.rho @ observable.matrix @ r2.rho @ observable.matrix)
    return 1.0 - _real_part(complex(overlap), tol, "ray overlap")
