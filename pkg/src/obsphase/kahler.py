"""Inhomogeneous coordinates and the pseudo-Kahler structure of the ray spaces.

In the eigenbasis of the observable, a state is the coefficient tuple
w_j = (e_j, psi).  Where the last coefficient does not vanish, the ratios
z^j = w_j / w_N (j < N) coordinatize the projective space of either sign.
Everything geometric is generated by the potential

    K(z) = ln( sign * Q ),    Q = sum_{l<N} lambda_l |z^l|^2 + lambda_N,

(for the negative-sign space this is the stated potential with every
eigenvalue negated): the metric coefficients are its mixed second
derivatives,

    g_{j kbar} = [ delta_jk lambda_j Q - lambda_j lambda_k zbar^j z^k ] / Q^2,

and the two-form coefficients are F_{j kbar} = i g_{j kbar}.  The same
coefficient formula serves both signs because negating every eigenvalue
flips Q and leaves the quotient unchanged.  Q -> 0 is the null-cone
singularity: the coefficients stay finite on each chart but diverge as it is
approached, which is how the cone is probed from either side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classify import NormalizedState
from .core import (
    DEFAULT_TOL,
    ChartDomainError,
    DimensionMismatchError,
    NullStateError,
    Observable,
    SingularityError,
    ToleranceConfig,
    ValidationError,
    principal_angle,
)
from .holonomy import DiscreteCurve, PhaseResult, _wrap_result

__all__ = [
    "KahlerChart",
    "to_chart",
    "from_chart",
    "kahler_potential",
    "metric_coeffs",
    "form_coeffs",
    "potential_hessian_fd",
    "compatibility_check",
    "chart_loop_phase",
    "two_state_chart",
]


@dataclass(frozen=True)
class KahlerChart:
    """A point of a signed projective space in inhomogeneous coordinates.

    ``eigenvalues`` lists all N weights; ``z`` holds the N-1 coordinates.
    Charts produced by :func:`to_chart` carry the eigenvalues ascending, but
    any ordering is accepted so closed-form examples can be written in their
    natural labeling.
    """

    z: np.ndarray
    eigenvalues: np.ndarray
    sign: int

    def __post_init__(self) -> None:
        z = np.atleast_1d(np.asarray(self.z, dtype=complex))
        lam = np.atleast_1d(np.asarray(self.eigenvalues, dtype=float))
        if z.ndim != 1 or lam.ndim != 1 or lam.size != z.size + 1:
            raise DimensionMismatchError(
                f"need N eigenvalues for N-1 coordinates, got {lam.size} and {z.size}"
            )
        if not (np.all(np.isfinite(z)) and np.all(np.isfinite(lam))):
            raise ValidationError("chart data contain non-finite entries")
        z = np.array(z, copy=True)
        z.setflags(write=False)
        lam = np.array(lam, copy=True)
        lam.setflags(write=False)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "eigenvalues", lam)
        if self.sign not in (1, -1):
            raise ValidationError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def denominator(self) -> float:
        """Q = sum_{l<N} lambda_l |z^l|^2 + lambda_N."""
        lam = self.eigenvalues
        return float(np.sum(lam[:-1] * np.abs(self.z) ** 2) + lam[-1])


def _require_regular(chart: KahlerChart, tol: ToleranceConfig) -> float:
    q = chart.denominator
    if chart.sign * q <= tol.null_tol:
        raise SingularityError(
            f"chart point too close to the null cone: sign * Q = {chart.sign * q:.3e}"
        )
    return q


def to_chart(state: NormalizedState, observable: Observable,
             tol: ToleranceConfig = DEFAULT_TOL) -> KahlerChart:
    """Inhomogeneous coordinates of a normalized state.

    The coordinates divide by the coefficient of the largest eigenvalue (the
    eigenvalues are ascending), so the chart is deterministic.  They are
    unchanged under psi -> c psi.

    Raises
    ------
    ChartDomainError
        If the dividing coefficient w_N is too small; the state needs a
        different chart, which is outside the single-chart scope.
    """
    if state.dim != observable.dim:
        raise DimensionMismatchError("state and observable dimensions disagree")
    w = observable.coefficients(state.psi)
    if abs(w[-1]) <= tol.null_tol:
        raise ChartDomainError(f"|w_N| = {abs(w[-1]):.3e} too small for this chart")
    return KahlerChart(z=w[:-1] / w[-1], eigenvalues=observable.eigenvalues, sign=state.sign)


def from_chart(chart: KahlerChart, observable: Observable,
               tol: ToleranceConfig = DEFAULT_TOL) -> NormalizedState:
    """A quadric-normalized representative state of a chart point.

    The representative has real positive w_N; its chart image reproduces the
    input coordinates.
    """
    if not np.allclose(chart.eigenvalues, observable.eigenvalues, atol=tol.eq_tol):
        raise ValidationError("chart eigenvalues do not match the observable's (ascending) spectrum")
    q = _require_regular(chart, tol)
    w_last = 1.0 / np.sqrt(chart.sign * q)
    w = np.concatenate([chart.z, [1.0]]) * w_last
    return NormalizedState(psi=observable.eigenvectors @ w, sign=chart.sign)


def kahler_potential(chart: KahlerChart, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Potential K = ln(sign * Q) generating the metric and the two-form.

    On the negative-sign space this equals the positive-space expression with
    every eigenvalue negated.

    Raises
    ------
    SingularityError
        If sign * Q is not positive: the point approaches the projective null
        set, which carries no Kahler structure.
    """
    q = _require_regular(chart, tol)
    return float(np.log(chart.sign * q))


def metric_coeffs(chart: KahlerChart, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Hermitian coefficient grid g_{j kbar} of the pseudo-Riemannian metric.

    Equal to the mixed Hessian of :func:`kahler_potential` and to -i times
    :func:`form_coeffs`.  With all eigenvalues equal to one this is the
    standard projective-space metric in inhomogeneous coordinates.
    """
    q = _require_regular(chart, tol)
    lam = chart.eigenvalues[:-1]
    weighted = lam * chart.z
    grid = (np.diag(lam) * q - np.outer(weighted.conj(), weighted)) / q**2
    return grid


def form_coeffs(chart: KahlerChart, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Coefficient grid F_{j kbar} of the symplectic two-form, i times the metric grid."""
    return 1j * metric_coeffs(chart, tol)


def _potential_at(chart: KahlerChart, z: np.ndarray, tol: ToleranceConfig) -> float:
    return kahler_potential(KahlerChart(z=z, eigenvalues=chart.eigenvalues, sign=chart.sign), tol)


def potential_hessian_fd(chart: KahlerChart, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Mixed Hessian d^2 K / dz^j dzbar^k by central finite differences.

    Independent verification route for :func:`metric_coeffs`: the potential
    is sampled on shifted coordinates with step ``tol.fd_step`` and the
    Wirtinger derivatives are assembled from the four real second
    derivatives,

        d^2/dz^j dzbar^k = (1/4) (dx_j dx_k + i dx_j dy_k - i dy_j dx_k + dy_j dy_k).
    """
    m = chart.z.size
    h = tol.fd_step
    z0 = np.asarray(chart.z)

    def shifted(j: int, axis: int, step: float) -> np.ndarray:
        dz = np.zeros(m, dtype=complex)
        dz[j] = step if axis == 0 else 1j * step
        return z0 + dz

    def second(j: int, aj: int, k: int, ak: int) -> float:
        if j == k and aj == ak:
            plus = _potential_at(chart, shifted(j, aj, h), tol)
            minus = _potential_at(chart, shifted(j, aj, -h), tol)
            center = _potential_at(chart, z0, tol)
            return (plus - 2.0 * center + minus) / h**2
        pp = _potential_at(chart, shifted(j, aj, h) + (shifted(k, ak, h) - z0), tol)
        pm = _potential_at(chart, shifted(j, aj, h) + (shifted(k, ak, -h) - z0), tol)
        mp = _potential_at(chart, shifted(j, aj, -h) + (shifted(k, ak, h) - z0), tol)
        mm = _potential_at(chart, shifted(j, aj, -h) + (shifted(k, ak, -h) - z0), tol)
        return (pp - pm - mp + mm) / (4.0 * h**2)

    hess = np.zeros((m, m), dtype=complex)
    for j in range(m):
        for k in range(m):
            dxx = second(j, 0, k, 0)
            dxy = second(j, 0, k, 1)
            dyx = second(j, 1, k, 0)
            dyy = second(j, 1, k, 1)
            hess[j, k] = 0.25 * (dxx + dyy + 1j * (dxy - dyx))
    return hess


def compatibility_check(chart: KahlerChart, x, y,
                        tol: ToleranceConfig = DEFAULT_TOL) -> tuple[float, float]:
    """Both sides of the compatibility relation g(X, Y) = F(X, J Y).

    ``x`` and ``y`` are the holomorphic coefficient lists of real tangent
    vectors X = sum_j x_j d/dz^j + conj(x_j) d/dzbar^j; the almost complex
    structure acts as J X = i X on holomorphic coefficients.  The two returned
    numbers agree within ``eq_tol``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    y = np.atleast_1d(np.asarray(y, dtype=complex))
    if x.shape != (chart.z.size,) or y.shape != (chart.z.size,):
        raise DimensionMismatchError("tangent coefficient lists must have N-1 entries")
    g = metric_coeffs(chart, tol)
    f = form_coeffs(chart, tol)
    lhs = np.einsum("jk,j,k->", g, x, y.conj()) + np.einsum("jk,j,k->", g, y, x.conj())
    jy = 1j * y
    rhs = np.einsum("jk,j,k->", f, x, jy.conj()) - np.einsum("jk,j,k->", f, jy, x.conj())
    for name, value in (("g(X,Y)", lhs), ("F(X,JY)", rhs)):
        if abs(value.imag) > tol.eq_tol * max(1.0, abs(value.real)):
            raise ValidationError(f"{name} is not real for real tangent vectors")
    return float(lhs.real), float(rhs.real)


def chart_loop_phase(curve: DiscreteCurve, observable: Observable,
                     tol: ToleranceConfig = DEFAULT_TOL) -> PhaseResult:
    """Loop phase from the coordinate-space integral

        gamma = closed integral ds  Im( sum_j lambda_j wbar^j dw^j/ds )
                                      / ( sum_j lambda_j |w^j|^2 ),

    evaluated with periodic central differences for dw/ds and the trapezoid
    rule in s.  The denominator makes the integrand independent of the
    normalization of the samples, but the lift must be smooth: the curve has
    to close on the same vector, not merely the same ray.

    Raises
    ------
    ChartDomainError
        If some sample leaves the chart (|w_N| ~ 0); the message names the
        sample index.
    NullStateError
        If some sample lies on the null cone.
    """
    if not curve.closed:
        raise ValidationError("chart loop phase is defined for closed curves only")
    if curve.dim != observable.dim:
        raise DimensionMismatchError("curve and observable dimensions disagree")
    first, last = curve.samples[0], curve.samples[-1]
    if np.max(np.abs(first - last)) > 1e-9 * max(1.0, float(np.max(np.abs(first)))):
        raise ValidationError("chart loop integral needs a periodic lift: endpoints must be equal vectors")

    # One representative per distinct sample; the duplicate endpoint closes the cycle.
    w = curve.samples[:-1] @ observable.eigenvectors.conj()
    s = curve.params[:-1]
    period = curve.params[-1] - curve.params[0]
    lam = observable.eigenvalues

    scale = np.max(np.abs(w), axis=1)
    small = np.abs(w[:, -1]) <= tol.null_tol * np.maximum(1.0, scale)
    if np.any(small):
        k = int(np.nonzero(small)[0][0])
        raise ChartDomainError(f"sample {k} leaves the chart: |w_N| = {abs(w[k, -1]):.3e}")

    def raw_integral(wk: np.ndarray, sk: np.ndarray) -> float:
        denom = np.einsum("kj,kj->k", wk.conj(), lam * wk).real
        norm_sq = np.einsum("kj,kj->k", wk.conj(), wk).real
        null = np.abs(denom) <= tol.null_tol * norm_sq
        if np.any(null):
            k = int(np.nonzero(null)[0][0])
            raise NullStateError(f"sample {k} lies on the null cone")
        s_next = np.roll(sk, -1)
        s_next[-1] += period
        s_prev = np.roll(sk, 1)
        s_prev[0] -= period
        dw = (np.roll(wk, -1, axis=0) - np.roll(wk, 1, axis=0)) / (s_next - s_prev)[:, None]
        integrand = np.einsum("kj,kj->k", wk.conj(), lam * dw).imag / denom
        weights = (s_next - s_prev) / 2.0
        return float(np.sum(integrand * weights))

    raw = raw_integral(w, s)
    estimated_error = np.pi
    if w.shape[0] >= 8:
        half = raw_integral(w[::2], s[::2])
        estimated_error = abs(principal_angle(raw - half))
    result = _wrap_result(raw, "chart_loop_integral", estimated_error)
    return result


def two_state_chart(theta: float, phi: float, sign: int,
                    tol: ToleranceConfig = DEFAULT_TOL) -> KahlerChart:
    """Chart point of the two-state hyperboloid family with weights (1, -1).

    With eigenvalues labeled lambda = (1, -1), the positive-sign rays are
    parameterized by w = (cosh(theta) e^{i phi}, sinh(theta)), giving
    z = coth(theta) e^{i phi}; the negative-sign rays by
    w = (sinh(theta) e^{i phi}, cosh(theta)), giving z = tanh(theta) e^{i phi}.

    Raises
    ------
    ChartDomainError
        At theta = 0 on the positive side, where the dividing coefficient
        sinh(theta) vanishes.
    """
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    if sign == 1:
        t = np.tanh(theta)
        if abs(t) <= tol.null_tol:
            raise ChartDomainError("positive-sign two-state chart is singular at theta = 0")
        z = np.exp(1j * phi) / t
    else:
        z = np.tanh(theta) * np.exp(1j * phi)
    return KahlerChart(z=np.array([z]), eigenvalues=np.array([1.0, -1.0]), sign=sign)
