"""Partition of state space by the sign of (psi, O psi).

A nonzero vector falls into one of three disjoint sets according to the sign
of its observable quadratic form: positive, negative, or null.  States in the
first two sets can be rescaled onto the unit quadrics where (psi, O psi) is
exactly +1 or -1; identifying collinear vectors there produces the two ray
spaces this package studies.  Null states admit no such normalization and are
only ever classified, never normalized.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    NullStateError,
    Observable,
    ToleranceConfig,
    ValidationError,
    as_state,
    o_norm,
)

__all__ = [
    "StateTag",
    "ONormClass",
    "NormalizedState",
    "RayPoint",
    "classify",
    "normalize_o",
    "quadric_residual",
    "ray_of",
    "ray_from_vector",
]


class StateTag(enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    NULL = "Null"


@dataclass(frozen=True)
class ONormClass:
    """Classification result: the tag and the raw value of (psi, O psi)."""

    tag: StateTag
    raw_value: float


@dataclass(frozen=True)
class NormalizedState:
    """A state scaled so that (psi, O psi) equals ``sign`` (+1 or -1)."""

    psi: np.ndarray
    sign: int

    def __post_init__(self) -> None:
        psi = np.array(as_state(self.psi), copy=True)
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)
        if self.sign not in (1, -1):
            raise ValidationError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def dim(self) -> int:
        return self.psi.size


@dataclass(frozen=True)
class RayPoint:
    """A ray represented by the rank-one matrix rho = psi psi^dagger.

    ``Tr rho`` is not 1 in general: states on the unit quadrics satisfy
    (psi, psi) = 1/|O_psi| instead.  The sign is stored because the positive
    and negative ray spaces are disjoint and must never be mixed downstream.
    """

    rho: np.ndarray
    sign: int

    def __post_init__(self) -> None:
        rho = np.array(np.asarray(self.rho, dtype=complex), copy=True)
        n = rho.shape[0]
        if rho.ndim != 2 or rho.shape != (n, n):
            raise ValidationError(f"rho must be square, got shape {rho.shape}")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        if self.sign not in (1, -1):
            raise ValidationError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.rho).real)


def classify(psi, observable: Observable, tol: ToleranceConfig = DEFAULT_TOL) -> ONormClass:
    """Classify a nonzero state by the sign of its observable average.

    The tag is decided from the scale-invariant quotient
    (psi, O psi) / (psi, psi) compared against ``tol.null_tol``, so the
    classification is unchanged under psi -> c psi for any nonzero complex c.
    ``raw_value`` reports the unnormalized quadratic form.
    """
    psi = as_state(psi)
    norm_sq = float(np.vdot(psi, psi).real)
    if norm_sq == 0.0:
        raise ValidationError("cannot classify the zero vector")
    raw = o_norm(psi, observable, tol)
    average = raw / norm_sq
    if average > tol.null_tol:
        tag = StateTag.POSITIVE
    elif average < -tol.null_tol:
        tag = StateTag.NEGATIVE
    else:
        tag = StateTag.NULL
    return ONormClass(tag=tag, raw_value=raw)


def normalize_o(psi, observable: Observable, tol: ToleranceConfig = DEFAULT_TOL) -> NormalizedState:
    """Scale a non-null state onto the quadric (psi, O psi) = +-1.

    Idempotent, and the resulting sign is invariant under psi -> c psi.

    Raises
    ------
    NullStateError
        If the state classifies as null; the normalization condition is
        ill-defined when (psi, O psi) = 0.
    """
    cls = classify(psi, observable, tol)
    if cls.tag is StateTag.NULL:
        raise NullStateError(
            f"normalization is ill-defined for a null state, (psi, O psi) = {cls.raw_value:.3e}"
        )
    scaled = as_state(psi) / np.sqrt(abs(cls.raw_value))
    sign = 1 if cls.tag is StateTag.POSITIVE else -1
    return NormalizedState(psi=scaled, sign=sign)


def quadric_residual(psi, observable: Observable) -> float:
    """Evaluate the quadric form sum_j lambda_j |w_j|^2 in the eigenbasis.

    Zero exactly on the null cone; coincides with (psi, O psi) for every
    state, which the tests use as a cross-check of the eigensystem.
    """
    w = observable.coefficients(psi)
    return float(np.sum(observable.eigenvalues * np.abs(w) ** 2))


def ray_of(state: NormalizedState) -> RayPoint:
    """Project a normalized state to its ray, rho = psi psi^dagger.

    The projection forgets the overall phase: collinear normalized states map
    to the same matrix.
    """
    rho = np.outer(state.psi, state.psi.conj())
    return RayPoint(rho=rho, sign=state.sign)


def ray_from_vector(psi, observable: Observable, tol: ToleranceConfig = DEFAULT_TOL) -> RayPoint:
    """Build the ray of an arbitrary non-null state without rescaling it.

    Useful for scale-invariant functionals such as the three-ray phase, which
    normalize internally.
    """
    psi = as_state(psi)
    cls = classify(psi, observable, tol)
    if cls.tag is StateTag.NULL:
        raise NullStateError("a null state has no ray in either signed ray space")
    sign = 1 if cls.tag is StateTag.POSITIVE else -1
    return RayPoint(rho=np.outer(psi, psi.conj()), sign=sign)
