"""
Collective-spin dynamics: frozen-spin Heisenberg solutions, squeezing
quantities, and an exact dense evolution oracle in the spin-j representation.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.linalg import expm

from .so3 import SpinState, basis_state, spin_j_generators, twice_spin

MAX_DIM = 256


@dataclass(frozen=True)
class TwistingParams:
    """One-axis twisting in a transverse field, H = 2 delta Jz^2 + Omega Jx."""

    delta: float
    Omega: float
    J: float

    def __post_init__(self):
        if not self.Omega > 0:
            raise ValueError("Omega must be positive")
        if not self.J > 0:
            raise ValueError("J must be positive")
        if self.Omega**2 + 4 * self.delta * self.Omega * self.J <= 0:
            raise ValueError("frozen-spin frequency is not real for these parameters")

    @property
    def omega0(self) -> float:
        return math.sqrt(self.Omega**2 + 4 * self.delta * self.Omega * self.J)

    @property
    def frozen_spin_ratio(self) -> float:
        """4 delta J / Omega; small values favour the frozen-spin regime."""
        return 4 * self.delta * self.J / self.Omega

    @property
    def N(self) -> float:
        return 2 * self.J


@dataclass(frozen=True)
class LMGParams:
    """Lipkin-Meshkov-Glick, H = -(lam/N)(Jx^2 + kappa Jy^2) - B Jz."""

    lam: float = 1.0
    kappa: float = 1.0
    B: float = 1.0
    N: Optional[int] = None

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if not 0 <= self.kappa <= 1:
            raise ValueError("kappa must lie in [0, 1]")
        if not self.B + self.lam * self.kappa > 0:
            raise ValueError("B + lambda*kappa must be positive")
        if self.N is not None and (self.N <= 0 or self.N % 2):
            raise ValueError("N must be a positive even integer")

    @property
    def omega1(self) -> float:
        return self.B + self.lam

    @property
    def omegaB(self) -> float:
        return math.sqrt((self.B + self.lam) * (self.B + self.lam * self.kappa))

    @property
    def amplitude_ratio(self) -> float:
        """sqrt((B + lam) / (B + lam kappa)), the Jx admixture in Jy(t)."""
        return math.sqrt((self.B + self.lam) / (self.B + self.lam * self.kappa))

    @property
    def isotropic(self) -> bool:
        return self.kappa == 1

    @property
    def frozen_spin_ratio(self) -> float:
        return self.lam / self.B if self.B else math.inf


@dataclass(frozen=True)
class SpinOpCoefficients:
    """Operator x Jx + y Jy + z Jz in terms of the t = 0 operators."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def expect(self, means) -> float:
        return float(self.as_array() @ np.asarray(means))


@dataclass(frozen=True)
class SqueezingReport:
    t: float
    varJy: float
    varJz: float
    corrYZ: float
    xi2_y: float
    xi2_z: float
    G_pair_zz: float

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "varJy": self.varJy,
            "varJz": self.varJz,
            "corrYZ": self.corrYZ,
            "xi2_y": self.xi2_y,
            "xi2_z": self.xi2_z,
            "G_pair": self.G_pair_zz,
        }


def oat_frozen_spin(p: TwistingParams, t: float):
    """(Jz(t), Jy(t)) coefficients with Jx frozen at -J."""
    w = p.omega0
    c, s = math.cos(w * t), math.sin(w * t)
    jz = SpinOpCoefficients(y=p.Omega / w * s, z=c)
    jy = SpinOpCoefficients(y=c, z=-w / p.Omega * s)
    return jz, jy


def lmg_evolution(p: LMGParams, t: float, mode: str = "frozen"):
    """(Jx(t), Jy(t)) coefficients; Jz is pinned at -N/2."""
    if mode == "isotropic":
        if not p.isotropic:
            raise ValueError("isotropic evolution requires kappa = 1")
        w = p.omega1
        c, s = math.cos(w * t), math.sin(w * t)
        return SpinOpCoefficients(x=c, y=s), SpinOpCoefficients(x=-s, y=c)
    if mode != "frozen":
        raise ValueError(f"unknown mode {mode!r}")
    w = p.omegaB
    r = p.amplitude_ratio
    c, s = math.cos(w * t), math.sin(w * t)
    return SpinOpCoefficients(x=c, y=s / r), SpinOpCoefficients(x=-r * s, y=c)


def pairwise_correlation(var: float, mean: float, N: float) -> float:
    """Two-spin correlation along a direction from collective variance and mean."""
    if N <= 1:
        return math.nan
    return ((4 / N**2) * (N * var + mean**2) - 1) / (N - 1)


def squeezing_report(p: TwistingParams, t: float) -> SqueezingReport:
    """Frozen-spin variances and squeezing from a Jx eigenstate with <Jx> = -J."""
    w, Om, J = p.omega0, p.Omega, p.J
    c2 = math.cos(w * t) ** 2
    s2 = math.sin(w * t) ** 2
    var_y = J / 2 * (c2 + (w / Om) ** 2 * s2)
    var_z = J / 2 * (c2 + (Om / w) ** 2 * s2)
    corr = J * math.cos(w * t) * math.sin(w * t) * (Om / w - w / Om)
    return SqueezingReport(
        t=t,
        varJy=var_y,
        varJz=var_z,
        corrYZ=corr,
        xi2_y=2 * var_y / J,
        xi2_z=2 * var_z / J,
        G_pair_zz=pairwise_correlation(var_z, 0.0, p.N),
    )


# Exact dense oracle


@dataclass(frozen=True)
class SpinMagnet:
    """Field along z.  H = B Jz, the sense in which exp(-iHt) advances phi by B t."""

    B: float

    def hamiltonian(self, twoj: int) -> np.ndarray:
        return self.B * _gens(twoj).Jz


@dataclass(frozen=True)
class OneAxisTwisting:
    delta: float
    Omega: float

    def hamiltonian(self, twoj: int) -> np.ndarray:
        g = _gens(twoj)
        return 2 * self.delta * g.Jz @ g.Jz + self.Omega * g.Jx


@dataclass(frozen=True)
class LMG:
    lam: float
    kappa: float
    B: float

    def hamiltonian(self, twoj: int) -> np.ndarray:
        g = _gens(twoj)
        N = twoj
        return -(self.lam / N) * (g.Jx @ g.Jx + self.kappa * g.Jy @ g.Jy) - self.B * g.Jz


@lru_cache(maxsize=64)
def _gens(twoj: int):
    return spin_j_generators(Fraction(twoj, 2))


@lru_cache(maxsize=64)
def _eigh(model, twoj: int):
    # lru_cache serialises insertion; cached arrays are never mutated
    w, v = np.linalg.eigh(model.hamiltonian(twoj))
    w.setflags(write=False)
    v.setflags(write=False)
    return w, v


def _check_dim(twoj: int):
    if twoj + 1 > MAX_DIM:
        raise ValueError(f"representation dimension {twoj + 1} exceeds cap {MAX_DIM}")


def exact_evolve(model, t: float, initial: SpinState) -> SpinState:
    """exp(-iHt)|initial> via Hermitian eigendecomposition."""
    _check_dim(initial.twoj)
    w, v = _eigh(model, initial.twoj)
    amps = v @ (np.exp(-1j * w * t) * (v.conj().T @ initial.amplitudes))
    return SpinState(initial.twoj, amps)


def lowest_jx_state(j) -> SpinState:
    """Jx eigenstate with eigenvalue -j."""
    twoj = twice_spin(j)
    _check_dim(twoj)
    g = _gens(twoj)
    # a +pi/2 turn about y carries -z to -x; avoids picking an eigenvector out of eigh
    amps = expm(-1j * (math.pi / 2) * g.Jy) @ basis_state(j, -Fraction(twoj, 2)).amplitudes
    return SpinState(twoj, amps)


def spin_moments(state: SpinState):
    """Means of (Jx, Jy, Jz), variances of Jy and Jz, and <JzJy + JyJz>."""
    g = _gens(state.twoj)
    psi = state.amplitudes
    means = np.array([state.expect(J) for J in g])
    second = lambda A, B: float(np.real(np.vdot(A.conj().T @ psi, B @ psi)))
    var_y = second(g.Jy, g.Jy) - means[1] ** 2
    var_z = second(g.Jz, g.Jz) - means[2] ** 2
    corr = second(g.Jz, g.Jy) + second(g.Jy, g.Jz)
    return means, var_y, var_z, corr


def squeezing_from_state(state: SpinState, t: float = 0.0) -> SqueezingReport:
    """Squeezing quantities of a state, with N = 2j particles."""
    means, var_y, var_z, corr = spin_moments(state)
    N = state.twoj
    mx, my, mz = means
    return SqueezingReport(
        t=t,
        varJy=var_y,
        varJz=var_z,
        corrYZ=corr,
        xi2_y=N * var_y / (mx**2 + mz**2),
        xi2_z=N * var_z / (mx**2 + my**2),
        G_pair_zz=pairwise_correlation(var_z, mz, N),
    )


def exact_squeezing(j, model, t: float) -> SqueezingReport:
    return squeezing_from_state(exact_evolve(model, t, lowest_jx_state(j)), t)


@dataclass(frozen=True)
class FrozenSpinDeviation:
    """Max over the time grid of |exact - frozen| / max|frozen|, per observable."""

    observables: tuple
    deviations: tuple
    t_max: float

    @property
    def max_deviation(self) -> float:
        return max(self.deviations)


def _tilted(base: SpinState, axes, tilt: float) -> SpinState:
    g = _gens(base.twoj)
    amps = base.amplitudes
    for axis in axes:
        amps = expm(-1j * tilt * getattr(g, axis)) @ amps
    return SpinState(base.twoj, amps)


def oat_frozen_spin_deviation(j, p: TwistingParams, t_max=None, steps=101, tilt=0.1) -> FrozenSpinDeviation:
    """Exact vs frozen-spin <Jz(t)>, <Jy(t)> for a slightly tilted -x polarised state."""
    if abs(p.J - float(j)) > 1e-12:
        raise ValueError("TwistingParams.J must equal j")
    t_max = math.pi / p.omega0 if t_max is None else t_max
    init = _tilted(lowest_jx_state(j), ("Jz", "Jy"), tilt)
    m0 = spin_moments(init)[0]
    model = OneAxisTwisting(p.delta, p.Omega)
    exact, pred = [], []
    for t in np.linspace(0.0, t_max, steps):
        m = spin_moments(exact_evolve(model, t, init))[0]
        jz, jy = oat_frozen_spin(p, t)
        exact.append([m[2], m[1]])
        pred.append([jz.expect(m0), jy.expect(m0)])
    return _deviation(("Jz", "Jy"), exact, pred, t_max)


def lmg_frozen_spin_deviation(j, p: LMGParams, t_max=None, steps=101, tilt=0.1) -> FrozenSpinDeviation:
    """Exact vs frozen-spin <Jx(t)>, <Jy(t)> for a slightly tilted lowest-weight state."""
    t_max = math.pi / p.omegaB if t_max is None else t_max
    twoj = twice_spin(j)
    init = _tilted(basis_state(j, -Fraction(twoj, 2)), ("Jy", "Jx"), tilt)
    m0 = spin_moments(init)[0]
    model = LMG(p.lam, p.kappa, p.B)
    exact, pred = [], []
    for t in np.linspace(0.0, t_max, steps):
        m = spin_moments(exact_evolve(model, t, init))[0]
        jx, jy = lmg_evolution(p, t, "frozen")
        exact.append([m[0], m[1]])
        pred.append([jx.expect(m0), jy.expect(m0)])
    return _deviation(("Jx", "Jy"), exact, pred, t_max)


def _deviation(names, exact, pred, t_max) -> FrozenSpinDeviation:
    exact, pred = np.array(exact), np.array(pred)
    scale = np.abs(pred).max(axis=0)
    devs = np.abs(exact - pred).max(axis=0) / scale
    return FrozenSpinDeviation(tuple(names), tuple(float(d) for d in devs), float(t_max))
