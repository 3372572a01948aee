"""Dense complex linear algebra substrate shared by the whole package.

Everything downstream works with plain ``numpy`` arrays: a state vector is a
one-dimensional complex array of length N >= 2, an observable is a Hermitian
N x N matrix bundled with its eigensystem.  All numerical comparisons go
through a single :class:`ToleranceConfig` so the tolerance policy lives in
one place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ObsPhaseError",
    "ValidationError",
    "DimensionMismatchError",
    "NumericalDomainError",
    "NullStateError",
    "ChartDomainError",
    "DegenerateOverlapError",
    "SingularityError",
    "ToleranceConfig",
    "DEFAULT_TOL",
    "Observable",
    "as_state",
    "inner",
    "o_inner",
    "o_norm",
    "eigendecompose",
    "identity_observable",
    "principal_angle",
    "angle_distance",
]


class ObsPhaseError(Exception):
    """Base class for every error raised by this package.

    ``exit_code`` is the process exit status the command line front end maps
    the error to (2 for contract violations, 3 for numerical domain errors).
    """

    exit_code = 2


class ValidationError(ObsPhaseError):
    """An input violates an operation contract."""

    exit_code = 2


class DimensionMismatchError(ValidationError):
    """Operands have incompatible dimensions."""


class NumericalDomainError(ObsPhaseError):
    """Well-formed input lying outside an operation's mathematical domain."""

    exit_code = 3


class NullStateError(NumericalDomainError):
    """The state has (psi, O psi) ~ 0, where the construction is undefined."""


class ChartDomainError(NumericalDomainError):
    """The state or coordinate leaves the domain of the single chart in use."""


class DegenerateOverlapError(NumericalDomainError):
    """A phase is requested from a vanishing overlap product."""


class SingularityError(NumericalDomainError):
    """Evaluation too close to the null-cone singularity of the geometry."""


@dataclass(frozen=True)
class ToleranceConfig:
    """Absolute tolerance policy.

    eq_tol
        Tolerance for equality checks of derived quantities.
    null_tol
        Threshold on the normalized observable average below which a state is
        classified as null; must be strictly larger than ``eq_tol``.
    fd_step
        Step used by finite-difference verification helpers.
    """

    eq_tol: float = 1e-10
    null_tol: float = 1e-9
    fd_step: float = 1e-4

    def __post_init__(self) -> None:
        if not (self.eq_tol > 0.0 and self.null_tol > 0.0 and self.fd_step > 0.0):
            raise ValidationError("tolerances must be strictly positive")
        if not self.null_tol > self.eq_tol:
            raise ValidationError("null_tol must be strictly larger than eq_tol")


DEFAULT_TOL = ToleranceConfig()


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return out


def as_state(psi) -> np.ndarray:
    """Coerce ``psi`` to a finite complex vector of length >= 2."""
    arr = np.asarray(psi, dtype=complex)
    if arr.ndim != 1 or arr.size < 2:
        raise DimensionMismatchError(
            f"state vector must be one-dimensional with length >= 2, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError("state vector has non-finite entries")
    return arr


def inner(a, b) -> complex:
    """Hermitian inner product (a, b), conjugate linear in the first slot."""
    a = as_state(a)
    b = as_state(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"length mismatch: {a.size} vs {b.size}")
    return complex(np.vdot(a, b))


@dataclass(frozen=True)
class Observable:
    """Hermitian operator together with its ascending eigensystem.

    ``eigenvectors[:, j]`` is the unit eigenvector of ``eigenvalues[j]``;
    eigenvalues are sorted ascending so coordinate charts built from the
    eigenbasis are deterministic.  ``degenerate`` flags a spectrum whose
    smallest gap falls below the null tolerance; such observables are still
    usable everywhere, the flag only records that eigenbasis-dependent
    constructions are not unique.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degenerate: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _readonly(np.asarray(self.matrix, dtype=complex)))
        object.__setattr__(self, "eigenvalues", _readonly(np.asarray(self.eigenvalues, dtype=float)))
        object.__setattr__(self, "eigenvectors", _readonly(np.asarray(self.eigenvectors, dtype=complex)))
        n = self.matrix.shape[0]
        if self.matrix.shape != (n, n) or self.eigenvectors.shape != (n, n) or self.eigenvalues.shape != (n,):
            raise DimensionMismatchError("inconsistent observable shapes")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def coefficients(self, psi: np.ndarray) -> np.ndarray:
        """Eigenbasis coefficients w_j = (e_j, psi)."""
        psi = as_state(psi)
        if psi.size != self.dim:
            raise DimensionMismatchError(f"state has length {psi.size}, observable is {self.dim}x{self.dim}")
        return self.eigenvectors.conj().T @ psi


def o_inner(a, observable: Observable, b) -> complex:
    """Matrix element (a, O b) of the observable between two states."""
    a = as_state(a)
    b = as_state(b)
    n = observable.dim
    if a.size != n or b.size != n:
        raise DimensionMismatchError(f"states of length {a.size}, {b.size} incompatible with {n}x{n} observable")
    return complex(np.vdot(a, observable.matrix @ b))


def o_norm(psi, observable: Observable, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """The real quadratic form (psi, O psi).

    The imaginary part must vanish for a Hermitian observable; it is checked
    against ``eq_tol`` (relative to the magnitude of the value) and discarded.
    """
    value = o_inner(psi, observable, psi)
    if abs(value.imag) > tol.eq_tol * max(1.0, abs(value.real)):
        raise ValidationError(f"(psi, O psi) has non-negligible imaginary part {value.imag:.3e}")
    return value.real


def _fix_eigenvector_phases(vecs: np.ndarray) -> np.ndarray:
    # Rotate each eigenvector so its largest-magnitude component is real
    # positive; charts built from the eigenbasis become reproducible.
    out = np.array(vecs)
    for j in range(out.shape[1]):
        k = int(np.argmax(np.abs(out[:, j])))
        pivot = out[k, j]
        if pivot != 0:
            out[:, j] *= np.conj(pivot) / abs(pivot)
    return out


def eigendecompose(matrix, tol: ToleranceConfig = DEFAULT_TOL) -> Observable:
    """Build an :class:`Observable` from a Hermitian matrix.

    Parameters
    ----------
    matrix : array_like
        Square complex matrix, Hermitian within ``tol.eq_tol``.
    tol : ToleranceConfig
        Tolerance policy; ``null_tol`` sets the degeneracy flag threshold.

    Returns
    -------
    Observable
        Eigenvalues ascending, orthonormal eigenvector columns with a fixed
        phase convention, reconstruction residual below 1e-8.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
        raise DimensionMismatchError(f"expected a square matrix of size >= 2, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    asym = np.max(np.abs(m - m.conj().T))
    if asym > tol.eq_tol:
        raise ValidationError(f"matrix is not Hermitian: max |M - M^dagger| = {asym:.3e}")

    vals, vecs = np.linalg.eigh(m)
    vecs = _fix_eigenvector_phases(vecs)
    residual = np.max(np.abs((vecs * vals) @ vecs.conj().T - m))
    if residual >= 1e-8:
        raise NumericalDomainError(f"eigendecomposition residual {residual:.3e} exceeds 1e-8")
    degenerate = bool(np.min(np.diff(vals)) < tol.null_tol)
    return Observable(matrix=m, eigenvalues=vals, eigenvectors=vecs, degenerate=degenerate)


def identity_observable(n: int) -> Observable:
    """The identity operator on an n-dimensional space.

    With this observable every construction in the package reduces to the
    textbook geometry of unit rays (Fubini-Study metric, ordinary geometric
    phase); it is degenerate by construction.
    """
    eye = np.eye(n, dtype=complex)
    return Observable(matrix=eye, eigenvalues=np.ones(n), eigenvectors=eye, degenerate=True)


def principal_angle(x: float) -> float:
    """Reduce an angle to the principal branch (-pi, pi]."""
    w = float(np.remainder(x, 2.0 * np.pi))
    if w > np.pi:
        w -= 2.0 * np.pi
    return w


def angle_distance(a: float, b: float) -> float:
    """Distance between two angles modulo 2 pi, in [0, pi]."""
    return abs(principal_angle(a - b))
