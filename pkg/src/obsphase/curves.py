"""Standard curves and surfaces used by the demos, the verification suite,
and the command line front end.

All loop generators take a parameter in [0, 1]; surface generators take
(u, v) in [0, 1]^2 and follow the counterclockwise boundary convention of
:mod:`obsphase.surface`.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .core import ValidationError
from .holonomy import DiscreteCurve

__all__ = [
    "sample_loop",
    "hyperboloid_loop",
    "hyperboloid_cap",
    "bloch_state",
    "bloch_circle",
    "bloch_octant",
    "geodesic_polygon",
    "surface_by_name",
    "SURFACE_FAMILIES",
]


def sample_loop(f: Callable[[float], np.ndarray], k: int,
                s_end: float = 1.0) -> DiscreteCurve:
    """Sample a periodic map on k uniform nodes including both endpoints.

    The final sample is forced bit-identical to the first so the periodic
    lift closes exactly.
    """
    if k < 3:
        raise ValidationError("need at least 3 samples")
    s = np.linspace(0.0, s_end, k)
    samples = np.asarray([f(float(si)) for si in s], dtype=complex)
    samples[-1] = samples[0]
    return DiscreteCurve(samples=samples, closed=True, params=s)


def hyperboloid_loop(r: float) -> Callable[[float], np.ndarray]:
    """Circle of rays (cosh r, e^{2 pi i s} sinh r) on the positive quadric
    of the weight-(1, -1) two-state observable."""
    def f(s: float) -> np.ndarray:
        return np.array([np.cosh(r), np.exp(2j * np.pi * s) * np.sinh(r)])
    return f


def hyperboloid_cap(r: float) -> Callable[[float, float], np.ndarray]:
    """Disk (u, v) -> (cosh(r u), e^{2 pi i v} sinh(r u)) whose boundary
    carries the r-circle of :func:`hyperboloid_loop`."""
    def f(u: float, v: float) -> np.ndarray:
        return np.array([np.cosh(r * u), np.exp(2j * np.pi * v) * np.sinh(r * u)])
    return f


def bloch_state(theta: float, phi: float) -> np.ndarray:
    """Unit spinor (cos(theta/2), e^{i phi} sin(theta/2))."""
    return np.array([np.cos(theta / 2.0), np.exp(1j * phi) * np.sin(theta / 2.0)])


def bloch_circle(theta0: float) -> Callable[[float], np.ndarray]:
    """Circle at colatitude theta0, traversed so the enclosed cap counts with
    negative orientation; with the identity observable its holonomy is
    -(1 - cos theta0) * pi."""
    def f(s: float) -> np.ndarray:
        return bloch_state(theta0, -2.0 * np.pi * s)
    return f


def bloch_octant() -> Callable[[float, float], np.ndarray]:
    """Octant of the unit sphere with boundary traversing the vertices
    +z -> +y -> +x; with the identity observable the boundary holonomy and
    the enclosed two-form integral are both -pi/4."""
    def f(u: float, v: float) -> np.ndarray:
        return bloch_state(v * np.pi / 2.0, u * np.pi / 2.0)
    return f


def _slerp(a: np.ndarray, b: np.ndarray, t: float) -> np.ndarray:
    overlap = complex(np.vdot(a, b))
    cos_angle = min(1.0, abs(overlap))
    angle = np.arccos(cos_angle)
    if angle < 1e-12:
        return a
    return (np.sin((1.0 - t) * angle) * a + np.sin(t * angle) * b) / np.sin(angle)


def geodesic_polygon(vertices: Sequence[np.ndarray], samples_per_edge: int) -> DiscreteCurve:
    """Closed polygon of great-circle arcs through unit vectors.

    Each edge is interpolated along the ray-space geodesic with a continuous
    lift: the next vertex representative is phase-aligned with the running
    endpoint, so the only phase carried around the polygon is geometric.
    Intended for unit-norm states probed with the identity observable.
    """
    verts = [np.asarray(v, dtype=complex) for v in vertices]
    if len(verts) < 3:
        raise ValidationError("a polygon needs at least three vertices")
    if samples_per_edge < 2:
        raise ValidationError("need at least two samples per edge")
    samples = [verts[0]]
    current = verts[0]
    for nxt in list(verts[1:]) + [verts[0]]:
        overlap = complex(np.vdot(current, nxt))
        if abs(overlap) < 1e-12:
            raise ValidationError("consecutive vertices are orthogonal: geodesic not unique")
        aligned = nxt * np.exp(-1j * np.angle(overlap))
        for t in np.linspace(0.0, 1.0, samples_per_edge + 1)[1:]:
            samples.append(_slerp(current, aligned, float(t)))
        current = aligned
    return DiscreteCurve(samples=np.asarray(samples, dtype=complex), closed=True)


def surface_by_name(name: str, **params) -> Callable[[float, float], np.ndarray]:
    """Look up a named surface family for the command line front end."""
    try:
        factory = SURFACE_FAMILIES[name]
    except KeyError:
        known = ", ".join(sorted(SURFACE_FAMILIES))
        raise ValidationError(f"unknown surface {name!r}; known surfaces: {known}") from None
    return factory(**params)


SURFACE_FAMILIES: dict[str, Callable[..., Callable[[float, float], np.ndarray]]] = {
    "hyperboloid_cap": lambda radius=0.8: hyperboloid_cap(radius),
    "bloch_octant": lambda: bloch_octant(),
}
