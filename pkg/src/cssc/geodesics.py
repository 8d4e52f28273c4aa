"""
Geodesics on the Euler and Tait-Bryan charts.

Closed-form solutions are radial: the angular coordinates are frozen at values
fixed by the target and ``rho(tau) = tan(K tau / 2 - C)``.  The numerical
oracle integrates the geodesic equations of a chart metric in its Cartesian
coordinates (regular at the identity) and shoots on the initial velocity.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from . import metric as mt
from .so3 import EulerCoords

RK_TOL = 1e-10
MAX_NEWTON = 100


class GeodesicConvergenceError(RuntimeError):
    """Shooting failed to hit the target within the iteration cap."""

    def __init__(self, message, iterations, residual):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class Chart:
    """Metric field on a coordinate chart, with first derivatives for the geodesic ODE.

    ``dmetric(y)[k, i, j]`` is the partial derivative of ``g_ij`` along ``y^k``.
    Without an analytic derivative, central differences are used.
    """

    def __init__(self, name: str, dim: int, metric: Callable, dmetric: Optional[Callable] = None, fd_step=1e-5):
        self.name = name
        self.dim = dim
        self._metric = metric
        self._dmetric = dmetric
        self.fd_step = fd_step

    def metric(self, y) -> np.ndarray:
        return self._metric(np.asarray(y, dtype=float))

    def dmetric(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if self._dmetric is not None:
            return self._dmetric(y)
        h = self.fd_step
        out = np.empty((self.dim, self.dim, self.dim))
        for k in range(self.dim):
            e = np.zeros(self.dim)
            e[k] = h
            out[k] = (self._metric(y + e) - self._metric(y - e)) / (2 * h)
        return out

    def check_points(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if pts.shape[1] != self.dim:
            raise mt.ChartDomainError(f"{self.name} chart points must have {self.dim} coordinates")
        if not np.all(np.isfinite(pts)):
            raise mt.ChartDomainError("non-finite chart point")
        return pts

    def acceleration(self, y, v) -> np.ndarray:
        g = self.metric(y)
        D = self.dmetric(y)
        # Gamma_{k,ij} v^i v^j = (d_i g_kj - d_k g_ij / 2) v^i v^j after symmetrising
        c = np.einsum("ikj,i,j->k", D, v, v) - 0.5 * np.einsum("kij,i,j->k", D, v, v)
        return -np.linalg.solve(g, c)

    def speed(self, y, v) -> float:
        return math.sqrt(max(float(v @ self.metric(y) @ v), 0.0))


def _cartesian_dmetric(y):
    s = y @ y
    b = -(s + 5) / (1 + s) ** 2
    da = -3 / (1 + s) ** 2
    db = (s + 9) / (1 + s) ** 3
    n = y.size
    eye = np.eye(n)
    yy = np.outer(y, y)
    return (
        2 * da * np.einsum("k,ij->kij", y, eye)
        + 2 * db * np.einsum("k,ij->kij", y, yy)
        + b * (np.einsum("ik,j->kij", eye, y) + np.einsum("i,jk->kij", y, eye))
    )


EULER_CHART = Chart(mt.EULER, 2, lambda y: mt.euler_metric_closed(EulerCoords(*y)).g)
TB_CHART = Chart(mt.TAIT_BRYAN, 3, mt._cartesian_closed, _cartesian_dmetric)


def chart_from_family(name, dim, U_family, penalty=None) -> Chart:
    """Chart whose metric is built numerically from a unitary family."""
    return Chart(name, dim, lambda y: mt.metric_at(U_family, y, penalty=penalty).g, fd_step=1e-4)


@dataclass(frozen=True)
class GeodesicSolution:
    K: float
    Theta0: Optional[float]
    Phi0: Optional[float]
    C_offset: float
    branch_n: int
    chart: str
    target: tuple

    @property
    def indeterminate(self) -> bool:
        return self.Theta0 is None

    def rho(self, tau):
        return np.tan(self.K * np.asarray(tau) / 2 - self.C_offset)

    def rho_dot(self, tau):
        r = self.rho(tau)
        return self.K / 2 * (1 + r * r)

    def _direction(self) -> np.ndarray:
        if self.indeterminate:
            return np.zeros(len(self.target))
        T = self.Theta0
        if self.chart == mt.EULER:
            return np.array([math.sin(T), math.cos(T)])
        P = self.Phi0
        return np.array([math.sin(P), math.sin(T) * math.cos(P), math.cos(T) * math.cos(P)])

    def point(self, tau) -> np.ndarray:
        """Chart coordinates at ``tau`` (scalar or array)."""
        return np.multiply.outer(self.rho(tau), self._direction())

    def velocity(self, tau) -> np.ndarray:
        return np.multiply.outer(self.rho_dot(tau), self._direction())


@dataclass(frozen=True)
class HJConstants:
    K2: float
    L: float
    M: float
    K2_drift: float
    L_max: float
    M_max: float
    samples: int

    @property
    def max_drift(self) -> float:
        return max(self.K2_drift, self.L_max, self.M_max)


@dataclass(frozen=True)
class ShootingResult:
    taus: np.ndarray
    path: np.ndarray
    velocities: np.ndarray
    length: float
    iterations: int
    residual: float
    v0: np.ndarray


def _solution(chart, target, norm, theta0, phi0, branch_n) -> GeodesicSolution:
    if not all(math.isfinite(t) for t in target):
        raise ValueError(f"non-finite target {target}")
    K = 2 * (math.atan(norm) + branch_n * math.pi)
    return GeodesicSolution(K, theta0, phi0, -branch_n * math.pi, branch_n, chart, tuple(target))


def euler_geodesic(theta: float, phi: float, branch_n: int = 0) -> GeodesicSolution:
    """Geodesic from the identity to beta(1) = theta, gamma(1) = phi on the Euler chart.

    For time-dependent targets pass ``theta=g, phi=f``.
    """
    norm = math.hypot(theta, phi)
    Theta0 = math.atan2(theta, phi) if norm > 0 else None
    return _solution(mt.EULER, (theta, phi), norm, Theta0, 0.0 if norm > 0 else None, branch_n)


def tb_geodesic(f1: float, f2: float, f3: float, branch_n: int = 0) -> GeodesicSolution:
    """Geodesic to (alpha, beta, gamma) = (f1, f2, f3) on the Tait-Bryan chart."""
    planar = math.hypot(f2, f3)
    norm = math.sqrt(f1 * f1 + f2 * f2 + f3 * f3)
    if norm == 0:
        return _solution(mt.TAIT_BRYAN, (f1, f2, f3), 0.0, None, None, branch_n)
    Theta0 = math.atan2(f2, f3) if planar > 0 else 0.0
    return _solution(mt.TAIT_BRYAN, (f1, f2, f3), norm, Theta0, math.atan2(f1, planar), branch_n)


def _as_tb(points):
    pts = np.atleast_2d(points)
    if pts.shape[1] == 2:
        pts = np.column_stack([np.zeros(len(pts)), pts])
    return pts


def hj_along(points, velocities, rho_min=1e-8, rho_max=1e2) -> HJConstants:
    """Speed, Theta-momentum and separation constant along sampled chart data.

    Euler-chart data is embedded in the Tait-Bryan chart at alpha = 0.
    Samples with rho < ``rho_min`` are skipped (angles undefined there), as are
    samples with rho > ``rho_max``: branches n >= 1 pass through the chart's
    point at infinity, where recovering angular rates from Cartesian data loses
    about eps * rho^3 in L.
    """
    y = _as_tb(points)
    v = _as_tb(velocities)
    rho = np.linalg.norm(y, axis=1)
    keep = (rho >= rho_min) & (rho <= rho_max)
    y, v, rho = y[keep], v[keep], rho[keep]
    a, b, c = y.T
    da, db, dc = v.T
    planar = np.hypot(b, c)
    Phi = np.arctan2(a, planar)
    rho_dot = np.einsum("ij,ij->i", y, v) / rho
    Theta_dot = (c * db - b * dc) / planar**2
    planar_dot = (b * db + c * dc) / planar
    Phi_dot = (planar * da - a * planar_dot) / rho**2

    r2 = rho**2
    radial = 4 / (1 + r2) ** 2
    ang = r2 * (r2 + 4) / (1 + r2)
    cos2 = np.cos(Phi) ** 2
    K2 = radial * rho_dot**2 + ang * (Phi_dot**2 + cos2 * Theta_dot**2)
    L = ang * cos2 * Theta_dot
    p_rho = radial * rho_dot
    p_Phi = ang * Phi_dot
    M_phi_side = p_Phi**2 + L**2 / cos2
    M_rho_side = K2 * ang - 0.25 * r2 * (r2 + 4) * (r2 + 1) * p_rho**2
    M = np.maximum(np.abs(M_phi_side), np.abs(M_rho_side))
    return HJConstants(
        K2=float(K2[0]),
        L=float(L[0]),
        M=float(M_phi_side[0]),
        K2_drift=float(np.ptp(K2)),
        L_max=float(np.abs(L).max()),
        M_max=float(M.max()),
        samples=int(keep.sum()),
    )


def hj_constants(sol: GeodesicSolution, samples: int = 100) -> HJConstants:
    taus = np.linspace(0.0, 1.0, samples)
    if sol.indeterminate:
        # pure branch offset: the path never leaves the identity
        return HJConstants(sol.K**2, 0.0, 0.0, 0.0, 0.0, 0.0, samples)
    return hj_along(sol.point(taus), sol.velocity(taus))


def _integrate(chart: Chart, v0, taus=None):
    d = chart.dim

    def rhs(_, z):
        y, v = z[:d], z[d : 2 * d]
        return np.concatenate([v, chart.acceleration(y, v), [chart.speed(y, v)]])

    z0 = np.concatenate([np.zeros(d), v0, [0.0]])
    return solve_ivp(rhs, (0.0, 1.0), z0, method="DOP853", rtol=RK_TOL, atol=RK_TOL, t_eval=taus)


def shoot_geodesic(chart: Chart, target: Sequence[float], tol: float = 1e-6, samples: int = 201) -> ShootingResult:
    """Geodesic from the identity (chart origin) to ``target`` by Newton shooting.

    The initial guess is the chart straight line; Newton steps on the initial
    velocity are damped by halving until the endpoint residual decreases.
    """
    target = chart.check_points(target)[0]
    d = chart.dim

    def endpoint(v0):
        sol = _integrate(chart, v0)
        if not sol.success:
            raise GeodesicConvergenceError(f"integrator failed: {sol.message}", 0, math.inf)
        return sol.y[:d, -1] - target

    v0 = target.copy()
    F = endpoint(v0)
    res = float(np.abs(F).max())
    it = 0
    while res > tol:
        if it >= MAX_NEWTON:
            raise GeodesicConvergenceError(
                f"no convergence after {it} iterations (residual {res:.3g})", it, res
            )
        it += 1
        h = 1e-7 * max(1.0, float(np.abs(v0).max()))
        Jac = np.empty((d, d))
        for k in range(d):
            e = np.zeros(d)
            e[k] = h
            Jac[:, k] = (endpoint(v0 + e) - F) / h
        step = np.linalg.solve(Jac, -F)
        lam = 1.0
        while True:
            trial = v0 + lam * step
            F_trial = endpoint(trial)
            r_trial = float(np.abs(F_trial).max())
            if r_trial < res or lam < 1e-4:
                break
            lam /= 2
        v0, F, res = trial, F_trial, r_trial

    taus = np.linspace(0.0, 1.0, samples)
    sol = _integrate(chart, v0, taus)
    return ShootingResult(
        taus=taus,
        path=sol.y[:d].T,
        velocities=sol.y[d : 2 * d].T,
        length=float(sol.y[2 * d, -1]),
        iterations=it,
        residual=res,
        v0=v0,
    )


def path_length(chart: Chart, path) -> float:
    """Arclength of a sampled chart path, metric evaluated at segment midpoints."""
    pts = chart.check_points(path)
    if len(pts) < 2:
        raise ValueError("path needs at least two samples")
    dy = np.diff(pts, axis=0)
    mid = (pts[1:] + pts[:-1]) / 2
    return float(sum(math.sqrt(max(d @ chart.metric(m) @ d, 0.0)) for d, m in zip(dy, mid)))


def path_length_estimate(chart: Chart, path) -> tuple:
    """(length, Richardson-extrapolated length, error estimate) from the full and every-other-sample paths."""
    pts = chart.check_points(path)
    fine = path_length(chart, pts)
    if len(pts) < 3 or (len(pts) - 1) % 2:
        return fine, fine, math.nan
    coarse = path_length(chart, pts[::2])
    extrap = fine + (fine - coarse) / 3
    return fine, extrap, abs(extrap - fine)
