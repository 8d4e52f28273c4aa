"""
Right-invariant cost metric on the space of unitaries.

The numerical builder projects the tangent ``dU U^-1`` of a parametrised family
onto the generators and contracts the projections with a penalty matrix.  The
closed forms cover the two first-order charts used by the package:

- Euler chart ``(beta, gamma)`` and its polar form ``(rho, Theta)``;
- Tait-Bryan chart ``(alpha, beta, gamma)`` and its spherical form
  ``(rho, Theta, Phi)``.

In Cartesian chart coordinates both closed forms reduce to

    g = a(s) I + b(s) y y^T,   s = |y|^2,
    a(s) = (s + 4) / (1 + s),  b(s) = -(s + 5) / (1 + s)^2,

which is regular at the origin; the polar/spherical forms are not.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .so3 import (
    EulerCoords,
    GeneratorBasis,
    TaitBryanCoords,
    defining_generators,
    euler_unitary_linearized,
    tb_unitary_linearized,
)

EULER = "euler"
POLAR = "euler-polar"
TAIT_BRYAN = "tait-bryan"
SPHERICAL = "tb-spherical"

FD_STEP = 1e-6
FD_FALLBACK_STEP = 1e-4
COND_LIMIT = 1e8


class ChartDomainError(ValueError):
    """Point lies outside the domain where a chart or family is usable."""


@dataclass(frozen=True)
class PenaltyMatrix:
    G: np.ndarray = field(default_factory=lambda: 4.0 * np.eye(3))

    def __post_init__(self):
        G = np.asarray(self.G, dtype=float)
        if G.shape != (3, 3) or not np.allclose(G, G.T, atol=1e-14):
            raise ValueError("penalty matrix must be symmetric 3x3")
        if np.linalg.eigvalsh(G).min() <= 0:
            raise ValueError("penalty matrix must be positive-definite")
        object.__setattr__(self, "G", G)


@dataclass(frozen=True)
class MetricTensor:
    g: np.ndarray
    chart: str
    # angular directions are degenerate at rho = 0 in polar/spherical charts
    singular: bool = False

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def line_element(self, dy) -> float:
        dy = np.asarray(dy, dtype=float)
        return float(dy @ self.g @ dy)


@dataclass(frozen=True)
class PolarCoords:
    rho: float
    Theta: Optional[float]

    @property
    def indeterminate(self) -> bool:
        return self.Theta is None


@dataclass(frozen=True)
class SphericalCoords:
    rho: float
    Theta: Optional[float]
    Phi: Optional[float]

    @property
    def indeterminate(self) -> bool:
        return self.Theta is None or self.Phi is None


def euler_family(y) -> np.ndarray:
    return euler_unitary_linearized(EulerCoords(*map(float, y)))


def tb_family(y) -> np.ndarray:
    return tb_unitary_linearized(TaitBryanCoords(*map(float, y)))


def _tangent(U_family, y, ydot, h):
    return (U_family(y + h * ydot) - U_family(y - h * ydot)) / (2 * h)


def control_functions(
    U_family: Callable[[np.ndarray], np.ndarray],
    y,
    ydot,
    basis: Optional[GeneratorBasis] = None,
    tangent: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Generator components Y^a of ``dU U^-1`` along the chart tangent ``ydot``.

    ``tangent`` is the exact ``dU`` along ``ydot`` if known; otherwise a central
    difference is taken (with a Richardson-extrapolated larger step when U is
    badly conditioned).
    """
    basis = basis or defining_generators()
    y = np.asarray(y, dtype=float)
    ydot = np.asarray(ydot, dtype=float)
    U = U_family(y)
    cond = np.linalg.cond(U)
    if not np.isfinite(cond) or cond > 1e14:
        raise ChartDomainError(f"family is singular at y={y.tolist()}")
    if tangent is None:
        if cond > COND_LIMIT:
            h = FD_FALLBACK_STEP
            tangent = (4 * _tangent(U_family, y, ydot, h / 2) - _tangent(U_family, y, ydot, h)) / 3
        else:
            tangent = _tangent(U_family, y, ydot, FD_STEP)
    D = tangent @ np.linalg.inv(U)
    return np.array([np.trace(D @ J.T) / np.trace(J @ J.T) for J in basis])


def metric_at(
    U_family,
    y,
    basis: Optional[GeneratorBasis] = None,
    penalty: Optional[PenaltyMatrix] = None,
    chart: str = "numeric",
) -> MetricTensor:
    g = nielsen_metric_matrix(U_family, y, basis, penalty)
    return MetricTensor(np.real(g + g.T) / 2, chart)


def nielsen_metric_matrix(U_family, y, basis=None, penalty=None) -> np.ndarray:
    """Complex Hermitian matrix G_ab Y^a_i conj(Y^b_j) before symmetrisation."""
    G = (penalty or PenaltyMatrix()).G
    y = np.asarray(y, dtype=float)
    d = y.size
    Y = np.array([control_functions(U_family, y, e, basis) for e in np.eye(d)])
    return Y @ G @ Y.conj().T


def _cartesian_closed(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    s = y @ y
    a = (s + 4) / (1 + s)
    b = -(s + 5) / (1 + s) ** 2
    return a * np.eye(y.size) + b * np.outer(y, y)


def euler_metric_closed(c: EulerCoords) -> MetricTensor:
    b, g = c.beta, c.gamma
    den = (1 + b * b + g * g) ** 2
    gbb = (g**4 + g * g * (b * b + 5) + 4) / den
    ggg = (b**4 + b * b * (g * g + 5) + 4) / den
    gbg = -b * g * (b * b + g * g + 5) / den
    return MetricTensor(np.array([[gbb, gbg], [gbg, ggg]]), EULER)


def tb_metric_closed(c: TaitBryanCoords) -> MetricTensor:
    """Tait-Bryan chart metric: the spherical diagonal form pulled back to (alpha, beta, gamma)."""
    return MetricTensor(_cartesian_closed([c.alpha, c.beta, c.gamma]), TAIT_BRYAN)


def _radial(rho):
    return 4 / (1 + rho * rho) ** 2


def _angular(rho):
    return rho * rho * (4 + rho * rho) / (1 + rho * rho)


def polar_metric_closed(p: PolarCoords) -> MetricTensor:
    return MetricTensor(np.diag([_radial(p.rho), _angular(p.rho)]), POLAR, singular=p.rho == 0)


def spherical_metric_closed(s: SphericalCoords) -> MetricTensor:
    """Diagonal metric in (rho, Theta, Phi) order."""
    r = s.rho
    # rho^2 (rho^4 + 5 rho^2 + 4) / (1 + rho^2)^2, written as printed
    ang = r * r * (r**4 + 5 * r * r + 4) / (1 + r * r) ** 2
    Phi = 0.0 if s.Phi is None else s.Phi
    return MetricTensor(
        np.diag([_radial(r), ang * np.cos(Phi) ** 2, ang]), SPHERICAL, singular=r == 0
    )


def to_polar(c: EulerCoords) -> PolarCoords:
    rho = float(np.hypot(c.beta, c.gamma))
    if rho == 0:
        return PolarCoords(0.0, None)
    return PolarCoords(rho, float(np.arctan2(c.beta, c.gamma)))


def from_polar(p: PolarCoords) -> EulerCoords:
    if p.rho < 0:
        raise ChartDomainError("rho must be non-negative")
    if p.rho == 0:
        return EulerCoords(0.0, 0.0)
    return EulerCoords(p.rho * np.sin(p.Theta), p.rho * np.cos(p.Theta))


def to_spherical(c: TaitBryanCoords) -> SphericalCoords:
    rho = float(np.linalg.norm([c.alpha, c.beta, c.gamma]))
    if rho == 0:
        return SphericalCoords(0.0, None, None)
    planar = float(np.hypot(c.beta, c.gamma))
    Phi = float(np.arctan2(c.alpha, planar))
    Theta = float(np.arctan2(c.beta, c.gamma)) if planar > 0 else None
    return SphericalCoords(rho, Theta, Phi)


def from_spherical(s: SphericalCoords) -> TaitBryanCoords:
    if s.rho < 0:
        raise ChartDomainError("rho must be non-negative")
    if s.rho == 0:
        return TaitBryanCoords(0.0, 0.0, 0.0)
    Theta = 0.0 if s.Theta is None else s.Theta
    return TaitBryanCoords(
        s.rho * np.sin(s.Phi),
        s.rho * np.sin(Theta) * np.cos(s.Phi),
        s.rho * np.cos(Theta) * np.cos(s.Phi),
    )


def polar_jacobian(p: PolarCoords) -> np.ndarray:
    """d(beta, gamma) / d(rho, Theta)."""
    r, T = p.rho, p.Theta
    return np.array([[np.sin(T), r * np.cos(T)], [np.cos(T), -r * np.sin(T)]])


def spherical_jacobian(s: SphericalCoords) -> np.ndarray:
    """d(alpha, beta, gamma) / d(rho, Theta, Phi)."""
    r, T, P = s.rho, s.Theta, s.Phi
    sT, cT, sP, cP = np.sin(T), np.cos(T), np.sin(P), np.cos(P)
    return np.array(
        [
            [sP, 0.0, r * cP],
            [sT * cP, r * cT * cP, -r * sT * sP],
            [cT * cP, -r * sT * cP, -r * cT * sP],
        ]
    )


def pullback(g: np.ndarray, jac: np.ndarray) -> np.ndarray:
    """jac^T g jac."""
    return jac.T @ g @ jac


def push_forward(g_diag: np.ndarray, jac: np.ndarray) -> np.ndarray:
    """Express a metric given in the new coordinates back in the original chart."""
    inv = np.linalg.inv(jac)
    return inv.T @ g_diag @ inv
