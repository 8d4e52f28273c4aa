"""
SO(3) generators, rotation parametrisations and coherent spin states.

Two representations are used throughout the package:

- the defining (3x3) representation, ``(J_a)_bc = -i eps_abc``, in which the
  first-order rotation operators below are real matrices;
- the spin-j representation on the basis ``|j, m>``, ordered m = -j, ..., j.

Spin values are carried internally as the integer ``2j`` so half-integers are
exact.
"""

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import expm
from scipy.special import comb

SMALL_ANGLE_LIMIT = 0.5


class SmallAngleWarning(UserWarning):
    """Emitted when a first-order formula is used outside its small-angle regime."""


@dataclass(frozen=True)
class GeneratorBasis:
    Jx: np.ndarray
    Jy: np.ndarray
    Jz: np.ndarray

    @property
    def rep_dim(self) -> int:
        return self.Jx.shape[0]

    def __iter__(self):
        return iter((self.Jx, self.Jy, self.Jz))

    @property
    def Jp(self) -> np.ndarray:
        return self.Jx + 1j * self.Jy

    @property
    def Jm(self) -> np.ndarray:
        return self.Jx - 1j * self.Jy


@dataclass(frozen=True)
class RotationAngles:
    """Polar angle ``theta`` and azimuth ``phi`` of a CSS rotation (radians)."""

    theta: float
    phi: float

    def __post_init__(self):
        _check_finite(self.theta, self.phi)

    @property
    def norm(self) -> float:
        return math.hypot(self.theta, self.phi)

    @property
    def small_angle(self) -> bool:
        return self.norm < SMALL_ANGLE_LIMIT


@dataclass(frozen=True)
class AxisAngleParams:
    """Rotation by ``theta`` about the in-plane axis (-sin phi, cos phi, 0)."""

    phi: float
    theta: float

    @property
    def xi(self) -> complex:
        return -(self.theta / 2) * np.exp(-1j * self.phi)

    @property
    def eta(self) -> complex:
        return math.tan(self.theta / 2) * np.exp(1j * self.phi)


@dataclass(frozen=True)
class EulerCoords:
    beta: float
    gamma: float

    def __post_init__(self):
        _check_finite(self.beta, self.gamma)


@dataclass(frozen=True)
class TaitBryanCoords:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        _check_finite(self.alpha, self.beta, self.gamma)


@dataclass(frozen=True)
class SpinState:
    """State of a spin-j system; ``amplitudes[k]`` belongs to m = -j + k."""

    twoj: int
    amplitudes: np.ndarray

    @property
    def j(self) -> Fraction:
        return Fraction(self.twoj, 2)

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(self.twoj + 1) - self.twoj / 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "SpinState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "SpinState") -> float:
        """|<self|other>|, insensitive to global phase."""
        return abs(self.overlap(other))

    def expect(self, op: np.ndarray) -> float:
        return float(np.real(np.vdot(self.amplitudes, op @ self.amplitudes)))


def _check_finite(*values):
    if not all(math.isfinite(v) for v in values):
        raise ValueError(f"non-finite coordinate in {values}")


def twice_spin(j) -> int:
    """Return 2j as an int, rejecting values that are not half-integers."""
    try:
        twoj = 2 * Fraction(j)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"j={j!r} is not a number") from exc
    if twoj.denominator != 1 or twoj < 0:
        raise ValueError(f"j={j} is not a non-negative half-integer")
    return int(twoj)


def defining_generators() -> GeneratorBasis:
    eps = np.zeros((3, 3, 3))
    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[a, b, c] = 1.0
        eps[a, c, b] = -1.0
    J = -1j * eps
    return GeneratorBasis(J[0], J[1], J[2])


def spin_j_generators(j) -> GeneratorBasis:
    twoj = twice_spin(j)
    jj = twoj / 2
    m = np.arange(twoj + 1) - jj
    # J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>; basis index increases with m
    ladder = np.sqrt(jj * (jj + 1) - m[:-1] * (m[:-1] + 1))
    Jp = np.diag(ladder, -1).astype(complex)
    Jm = Jp.conj().T
    return GeneratorBasis((Jp + Jm) / 2, (Jp - Jm) / 2j, np.diag(m).astype(complex))


def basis_state(j, m) -> SpinState:
    """Weight state |j, m>."""
    twoj = twice_spin(j)
    k = Fraction(m) + Fraction(twoj, 2)
    if k.denominator != 1 or not 0 <= k <= twoj:
        raise ValueError(f"m={m} is not a weight of spin j={j}")
    amps = np.zeros(twoj + 1, dtype=complex)
    amps[int(k)] = 1.0
    return SpinState(twoj, amps)


def css_operator_linearized(angles: RotationAngles) -> np.ndarray:
    """First-order matrix of the rotation taking z to r(theta, phi).

    >>> css_operator_linearized(RotationAngles(0.1, 0.2))[0]
    array([ 1. , -0.2,  0.1])
    """
    if not angles.small_angle:
        warnings.warn(
            f"angle norm {angles.norm:.3g} outside small-angle regime", SmallAngleWarning, stacklevel=2
        )
    th, ph = angles.theta, angles.phi
    return np.array([[1.0, -ph, th], [ph, 1.0, 0.0], [-th, 0.0, 1.0]])


def euler_unitary_linearized(c: EulerCoords) -> np.ndarray:
    b, g = c.beta, c.gamma
    return np.array([[1.0, -g, b], [g, 1.0, 0.0], [-b, 0.0, 1.0]])


def tb_unitary_linearized(c: TaitBryanCoords) -> np.ndarray:
    a, b, g = c.alpha, c.beta, c.gamma
    return np.array([[1.0, -g, b], [g, 1.0, -a], [-b, a, 1.0]])


def rotation(basis: GeneratorBasis, axis, angle: float) -> np.ndarray:
    """exp(-i angle n.J) for a (not necessarily unit) axis n."""
    n = np.asarray(axis, dtype=float)
    gen = n[0] * basis.Jx + n[1] * basis.Jy + n[2] * basis.Jz
    return expm(-1j * angle * gen)


def css_state(j, angles: RotationAngles) -> SpinState:
    twoj = twice_spin(j)
    jj = twoj / 2
    m = np.arange(twoj + 1) - jj
    c, s = math.cos(angles.theta / 2), math.sin(angles.theta / 2)
    amps = (
        np.sqrt(comb(twoj, jj + m))
        * c ** (jj + m)
        * s ** (jj - m)
        * np.exp(1j * (jj - m) * angles.phi)
    )
    return SpinState(twoj, amps.astype(complex))


def css_state_dense(j, angles: RotationAngles) -> SpinState:
    """exp(xi J+ - conj(xi) J-)|j, j> by dense matrix exponential."""
    basis = spin_j_generators(j)
    xi = AxisAngleParams(angles.phi, angles.theta).xi
    top = basis_state(j, j)
    op = expm(xi * basis.Jp - np.conj(xi) * basis.Jm)
    return SpinState(top.twoj, op @ top.amplitudes)


def axis_angle_shift_identity(theta: float, a: float, j) -> float:
    """Fidelity between the axis-angle and Euler forms of a shifted y-rotation.

    Compares exp(-i theta (Jy cos a - Jx sin a))|j,-j> with
    exp(-i a Jz) exp(-i theta Jy) exp(i a Jz)|j,-j>.
    """
    basis = spin_j_generators(j)
    low = basis_state(j, -Fraction(twice_spin(j), 2)).amplitudes
    s1 = expm(-1j * theta * (basis.Jy * math.cos(a) - basis.Jx * math.sin(a))) @ low
    s2 = expm(-1j * a * basis.Jz) @ expm(-1j * theta * basis.Jy) @ expm(1j * a * basis.Jz) @ low
    return float(abs(np.vdot(s1, s2)))
