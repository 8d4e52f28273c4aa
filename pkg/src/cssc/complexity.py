"""
Closed-form circuit complexities of coherent spin state operators.

Every formula reduces to ``2 arctan(|target|) + 2 pi n``, where ``target`` holds
the first-order rotation amounts the operator needs in the chart: two
(Euler) or three (Tait-Bryan).  Model-specific code only supplies the target.
"""

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

from .dynamics import LMGParams, SqueezingReport, TwistingParams
from .metric import EULER, TAIT_BRYAN
from .so3 import SMALL_ANGLE_LIMIT, RotationAngles, SmallAngleWarning


class IdentityViolation(ArithmeticError):
    """An algebraic identity between two complexity forms failed."""


class EulerTargets(NamedTuple):
    """Euler-chart targets: gamma(1) = f, beta(1) = g."""

    f: float
    g: float


class TBTargets(NamedTuple):
    """Tait-Bryan targets: (alpha, beta, gamma)(1) = (f1, f2, f3)."""

    f1: float
    f2: float
    f3: float


@dataclass(frozen=True)
class ComplexityResult:
    value: float
    branch_n: int
    chart: str
    norm: float

    @property
    def small_angle(self) -> bool:
        return self.norm < SMALL_ANGLE_LIMIT

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class DickeParams:
    alpha_r: float
    alpha_i: float
    omega: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")


def _from_norm(norm: float, n: int, chart: str, warn: bool = True) -> ComplexityResult:
    if not math.isfinite(norm):
        raise ValueError("non-finite target")
    if warn and norm >= SMALL_ANGLE_LIMIT:
        warnings.warn(
            f"target norm {norm:.3g} outside the small-angle regime", SmallAngleWarning, stacklevel=3
        )
    return ComplexityResult(2 * math.atan(norm) + 2 * math.pi * n, n, chart, norm)


def static_complexity(angles: RotationAngles, n: int = 0) -> ComplexityResult:
    return _from_norm(math.hypot(angles.theta, angles.phi), n, EULER)


def timedep_complexity(fb: EulerTargets, n: int = 0) -> ComplexityResult:
    # (beta, gamma) order, matching the Tait-Bryan embedding (0, beta, gamma)
    return _from_norm(math.hypot(fb.g, fb.f), n, EULER)


def class1_targets(angles: RotationAngles, B: float, t: float) -> EulerTargets:
    return EulerTargets(angles.phi + B * t, angles.theta)


def class1_complexity(angles: RotationAngles, B: float, t: float, n: int = 0) -> ComplexityResult:
    """Spin in a static field along z: the azimuth advances to phi + B t."""
    return timedep_complexity(class1_targets(angles, B, t), n)


def oat_boundary_functions(angles: RotationAngles, p: TwistingParams, t: float) -> EulerTargets:
    w, Om = p.omega0, p.Omega
    th, ph = angles.theta, angles.phi
    c, s = math.cos(w * t), math.sin(w * t)
    return EulerTargets(ph * c - th * w / Om * s, ph * Om / w * s + th * c)


def oat_complexity(angles: RotationAngles, p: TwistingParams, t: float, n: int = 0) -> ComplexityResult:
    return timedep_complexity(oat_boundary_functions(angles, p, t), n)


def oat_complexity_via_squeezing(
    angles: RotationAngles, report: SqueezingReport, J: float, n: int = 0
) -> ComplexityResult:
    """Same complexity written through squeezing parameters and the y-z correlation."""
    th, ph = angles.theta, angles.phi
    radicand = th * th * report.xi2_y + ph * ph * report.xi2_z + 2 * th * ph / J * report.corrYZ
    if radicand < 0:
        # a sum of squares in disguise; only roundoff may push it below zero
        scale = th * th * report.xi2_y + ph * ph * report.xi2_z
        if radicand < -1e-12 * max(scale, 1.0):
            raise IdentityViolation(f"negative radicand {radicand!r}")
        radicand = 0.0
    return _from_norm(math.sqrt(radicand), n, EULER)


def pairwise_complexity(phi: float, G_pair: float, N: float, n: int = 0) -> ComplexityResult:
    """Complexity at theta = 0 from the pairwise zz correlation of N spins."""
    arg = (N - 1) * G_pair + 1
    if arg < 0:
        raise ValueError("(N - 1) G + 1 must be non-negative")
    return _from_norm(abs(phi) * math.sqrt(arg), n, EULER)


def tb_complexity(fb: TBTargets, n: int = 0) -> ComplexityResult:
    return _from_norm(math.hypot(fb.f1, fb.f2, fb.f3), n, TAIT_BRYAN)


def lmg_boundary_functions(angles: RotationAngles, p: LMGParams, t: float) -> TBTargets:
    """Tait-Bryan targets of the frozen-spin anisotropic LMG operator."""
    w = p.omegaB
    return TBTargets(
        -angles.theta * p.amplitude_ratio * math.sin(w * t),
        angles.theta * math.cos(w * t),
        angles.phi,
    )


def lmg_targets(angles: RotationAngles, p: LMGParams, t: float) -> TBTargets:
    """Targets used for the LMG complexity.

    At kappa = 1 the Jx admixture has unit weight, so the rotated y-generator is
    a z-conjugated Jy and the operator collapses (on weight states) to a pure
    azimuth shift by omega1 t, as for a spin in a field.  For kappa < 1 this
    shortcut is unavailable and the Tait-Bryan targets are used.
    """
    if p.isotropic:
        f, g = class1_targets(angles, p.omega1, t)
        return TBTargets(0.0, g, f)
    return lmg_boundary_functions(angles, p, t)


def lmg_complexity(angles: RotationAngles, p: LMGParams, t: float, n: int = 0) -> ComplexityResult:
    return tb_complexity(lmg_targets(angles, p, t), n)


def displacement_complexity(dp: DickeParams) -> float:
    return math.sqrt(2 * (dp.alpha_r**2 / dp.omega + dp.omega * dp.alpha_i**2))


def dicke_complexity(dp: DickeParams, angles: RotationAngles, n: int = 0) -> float:
    """Oscillator displacement plus spin rotation, costed independently."""
    return displacement_complexity(dp) + static_complexity(angles, n).value
