import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cssc import complexity as cx
from cssc import dynamics as dy
from cssc.geodesics import EULER_CHART, TB_CHART, shoot_geodesic
from cssc.so3 import RotationAngles, SmallAngleWarning

OMEGA0 = 1.1832159566  # sqrt(1.4)
OAT_QUARTER = 0.3348961584  # 2 arctan(0.2 / sqrt(1.4))
STATIC_01_02 = 0.4399759548

small = st.floats(-0.3, 0.3)


@pytest.mark.parametrize(
    "theta, phi, n, expected",
    [
        (0.0, 0.0, 0, 0.0),
        (0.1, 0.2, 0, STATIC_01_02),
        (0.1, 0.2, 2, STATIC_01_02 + 4 * math.pi),
    ],
)
def test_static(theta, phi, n, expected):
    assert cx.static_complexity(RotationAngles(theta, phi), n).value == pytest.approx(expected, abs=1e-10)


def test_static_against_shooting():
    res = shoot_geodesic(EULER_CHART, (0.1, 0.2))
    assert cx.static_complexity(RotationAngles(0.1, 0.2)).value == pytest.approx(res.length, abs=1e-5)


def test_timedep():
    a = RotationAngles(0.13, -0.07)
    assert cx.timedep_complexity(cx.EulerTargets(a.phi, a.theta)).value == cx.static_complexity(a).value
    assert cx.timedep_complexity(cx.EulerTargets(0.3, 0.4)).value == pytest.approx(2 * math.atan(0.5))
    assert cx.timedep_complexity(cx.EulerTargets(0.0, 0.0), 1).value == pytest.approx(2 * math.pi)


def test_timedep_against_shooting():
    res = shoot_geodesic(EULER_CHART, (0.4, 0.3))
    assert cx.timedep_complexity(cx.EulerTargets(0.3, 0.4)).value == pytest.approx(res.length, abs=1e-5)


def test_class1():
    a = RotationAngles(0.1, 0.1)
    assert cx.class1_complexity(a, 1.0, 0.0).value == cx.static_complexity(a).value
    shifted = cx.static_complexity(RotationAngles(0.1, 0.2)).value
    assert cx.class1_complexity(a, 1.0, 0.1).value == pytest.approx(shifted, abs=1e-12)
    with pytest.warns(SmallAngleWarning):
        late = cx.class1_complexity(a, 1.0, 1e6).value
    assert math.pi - 1e-5 < late < math.pi


def test_oat_boundary_functions():
    a = RotationAngles(0.0, 0.2)
    p = dy.TwistingParams(0.01, 1.0, 10)
    assert p.omega0 == pytest.approx(OMEGA0, abs=1e-10)
    f, g = cx.oat_boundary_functions(a, p, math.pi / (2 * p.omega0))
    assert f == pytest.approx(0.0, abs=1e-15)
    assert g == pytest.approx(0.2 / math.sqrt(1.4), abs=1e-12)
    assert cx.oat_complexity(a, p, math.pi / (2 * p.omega0)).value == pytest.approx(OAT_QUARTER, abs=1e-10)
    assert cx.oat_boundary_functions(RotationAngles(0.1, 0.2), p, 0.0) == (0.2, 0.1)


@settings(max_examples=50, deadline=None)
@given(theta=small, phi=small, Omega=st.floats(0.1, 5.0), t=st.floats(0, 50))
def test_oat_rigid_without_twisting(theta, phi, Omega, t):
    a = RotationAngles(theta, phi)
    p = dy.TwistingParams(0.0, Omega, 10)
    f, g = cx.oat_boundary_functions(a, p, t)
    assert f * f + g * g == pytest.approx(theta**2 + phi**2, abs=1e-14)
    assert abs(cx.oat_complexity(a, p, t).value - cx.static_complexity(a).value) < 1e-12


@settings(max_examples=100, deadline=None)
@given(
    theta=small,
    phi=small,
    Omega=st.floats(0.2, 3.0),
    delta=st.floats(0.0, 0.05),
    J=st.floats(0.5, 50.0),
    t=st.floats(0.0, 20.0),
)
def test_squeezing_identity(theta, phi, Omega, delta, J, t):
    a = RotationAngles(theta, phi)
    p = dy.TwistingParams(delta, Omega, J)
    rep = dy.squeezing_report(p, t)
    direct = cx.oat_complexity(a, p, t).value
    assert abs(cx.oat_complexity_via_squeezing(a, rep, J).value - direct) < 1e-12


def test_squeezing_first_order():
    p = dy.TwistingParams(0.01, 1.0, 10)
    t = 0.9
    rep = dy.squeezing_report(p, t)
    phi = 1e-4
    val = cx.oat_complexity_via_squeezing(RotationAngles(0.0, phi), rep, p.J).value
    assert val == pytest.approx(2 * phi * math.sqrt(rep.xi2_z), rel=1e-7)


def test_negative_radicand_flagged():
    bad = dy.SqueezingReport(0.0, 0.0, 0.0, -100.0, 1.0, 1.0, 0.0)
    with pytest.raises(cx.IdentityViolation):
        cx.oat_complexity_via_squeezing(RotationAngles(0.2, 0.2), bad, 1.0)


def test_pairwise():
    assert cx.pairwise_complexity(0.2, 0.0, 20).value == pytest.approx(2 * math.atan(0.2))
    p = dy.TwistingParams(0.01, 1.0, 10)
    rep = dy.squeezing_report(p, 0.0)
    assert cx.pairwise_complexity(0.2, rep.G_pair_zz, p.N).value == cx.static_complexity(RotationAngles(0, 0.2)).value


@settings(max_examples=50, deadline=None)
@given(phi=small, delta=st.floats(0.0, 0.05), J=st.integers(1, 40), t=st.floats(0, 20))
def test_pairwise_matches_direct(phi, delta, J, t):
    p = dy.TwistingParams(delta, 1.0, J)
    rep = dy.squeezing_report(p, t)
    a = RotationAngles(0.0, phi)
    assert abs(cx.pairwise_complexity(phi, rep.G_pair_zz, p.N).value - cx.oat_complexity(a, p, t).value) < 1e-12


def test_tb_complexity():
    a = RotationAngles(0.1, 0.2)
    assert cx.tb_complexity(cx.TBTargets(0.0, 0.1, 0.2)).value == cx.static_complexity(a).value
    assert cx.tb_complexity(cx.TBTargets(0.1, 0.1, 0.1)).value == pytest.approx(0.3430071080, abs=1e-10)
    assert cx.tb_complexity(cx.TBTargets(0, 0, 0), 1).value == pytest.approx(2 * math.pi)
    res = shoot_geodesic(TB_CHART, (0.1, 0.1, 0.1))
    assert cx.tb_complexity(cx.TBTargets(0.1, 0.1, 0.1)).value == pytest.approx(res.length, abs=1e-5)


def test_lmg_targets_start():
    a = RotationAngles(0.15, 0.05)
    for kappa in (1.0, 0.5):
        assert tuple(cx.lmg_targets(a, dy.LMGParams(1.0, kappa, 3.0), 0.0)) == (0.0, 0.15, 0.05)


@settings(max_examples=50, deadline=None)
@given(theta=small, phi=small, B=st.floats(0.1, 20), lam=st.floats(0.1, 3), t=st.floats(0, 30))
def test_lmg_isotropic(theta, phi, B, lam, t):
    a = RotationAngles(theta, phi)
    p = dy.LMGParams(lam, 1.0, B)
    f1, f2, f3 = cx.lmg_boundary_functions(a, p, t)
    assert f1 * f1 + f2 * f2 == pytest.approx(theta**2, abs=1e-14)
    assert cx.lmg_complexity(a, p, t).value == cx.class1_complexity(a, B + lam, t).value


def test_lmg_anisotropic_value():
    a = RotationAngles(0.1, 0.05)
    p = dy.LMGParams(1.0, 0.5, 10.0)
    f1, f2, f3 = cx.lmg_targets(a, p, 0.05)
    assert f1 == pytest.approx(-0.1 * math.sqrt(11 / 10.5) * math.sin(0.05 * math.sqrt(115.5)), abs=1e-15)
    assert f1 == pytest.approx(-0.0523910776, abs=1e-10)
    assert f3 == 0.05


def test_dicke():
    dp = cx.DickeParams(1.0, 1.0, 2.0)
    assert cx.dicke_complexity(dp, RotationAngles(0, 0)) == pytest.approx(2.2360679775, abs=1e-10)
    a = RotationAngles(0.1, 0.2)
    assert cx.dicke_complexity(cx.DickeParams(0, 0, 3.0), a) == cx.static_complexity(a).value
    with pytest.raises(ValueError):
        cx.DickeParams(0, 0, 0.0)


def test_result_metadata():
    r = cx.static_complexity(RotationAngles(0.1, 0.2), 1)
    assert r.branch_n == 1 and r.small_angle and float(r) == r.value
    with pytest.warns(SmallAngleWarning):
        assert not cx.static_complexity(RotationAngles(0.5, 0.5)).small_angle
