"""Nielsen circuit complexity of coherent spin state operators."""

from .complexity import (
    ComplexityResult,
    DickeParams,
    EulerTargets,
    IdentityViolation,
    TBTargets,
    class1_complexity,
    dicke_complexity,
    lmg_complexity,
    oat_complexity,
    oat_complexity_via_squeezing,
    pairwise_complexity,
    static_complexity,
    tb_complexity,
    timedep_complexity,
)
from .dynamics import LMGParams, TwistingParams
from .geodesics import GeodesicConvergenceError, euler_geodesic, shoot_geodesic, tb_geodesic
from .so3 import RotationAngles, SmallAngleWarning, SpinState, css_state

__version__ = "0.1.0"
