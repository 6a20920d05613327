import math
import warnings

import numpy as np
import pytest

from delayosc.errors import InvalidParameter, OutOfHorizon
from delayosc.fundamental import (
    CANCELLATION_LIMIT,
    MAX_INTERVALS,
    Kind,
    build_fundamental,
    delay_cosine,
    delay_sine,
    eval_piecewise,
)
from delayosc.trigpoly import TrigPoly, derivative

from _oracles import step_by_quadrature

PARAMS = [(0.0, 1.0, 1.0), (1.0, 0.5, 1.0), (2.0, 1.5, 0.8), (0.7, 2.0, 0.4), (1.3, 0.0, 1.1)]
# sets where the trig-polynomial form is well conditioned
WELL = [p for p in PARAMS if p != (0.7, 2.0, 0.4)]


def test_classical_cosine():
    x1 = build_fundamental(Kind.X1, 2.0, 0.0, 1.0, 3)
    t = np.linspace(0, 2.999, 300)
    np.testing.assert_allclose(x1(t), np.cos(2 * t), atol=1e-12)


def test_pure_delay_first_segment():
    x1 = build_fundamental(Kind.X1, 0.0, 1.0, 1.0, 1)
    assert x1.segments[0] == TrigPoly.pure([1.0, 0.0, -0.5])
    t = np.linspace(0, 0.999, 50)
    np.testing.assert_allclose(x1(t), delay_cosine(1.0, 1.0, t), atol=1e-15)


@pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("tau", [0.5, 1.3])
def test_pure_delay_sine_reduction(omega, tau):
    x2 = build_fundamental(Kind.X2, 0.0, omega, tau, 6)
    t = np.linspace(-tau, 6 * tau, 400, endpoint=False)
    np.testing.assert_allclose(omega * x2(t), delay_sine(omega, tau, t), atol=1e-11, rtol=1e-13)


def test_initial_conditions():
    tau = 0.7
    x1 = build_fundamental(Kind.X1, 1.0, 1.0, tau, 2)
    x2 = build_fundamental(Kind.X2, 1.0, 1.0, tau, 2)
    assert x1(-0.5 * tau) == 1.0
    assert x1(-0.5 * tau, order=1) == 0.0
    assert x2(-tau) == 0.0
    assert x2(-tau, order=1) == 1.0
    for ps in (x1, x2):
        assert ps(-tau - 0.1) == 0.0
        assert ps(-5.0, order=1) == 0.0


def test_kernel_prelude_is_free_oscillation():
    w1, tau = 1.4, 0.9
    k = build_fundamental(Kind.KERNEL, w1, 0.6, tau, 2)
    t = np.linspace(-tau, 0, 20, endpoint=False)
    np.testing.assert_allclose(k(t), np.sin(w1 * (t + tau)) / w1, atol=1e-15)
    k0 = build_fundamental(Kind.KERNEL, 0.0, 0.6, tau, 3)
    x2 = build_fundamental(Kind.X2, 0.0, 0.6, tau, 3)
    t = np.linspace(-tau, 3 * tau, 50, endpoint=False)
    np.testing.assert_allclose(k0(t), x2(t), atol=1e-15)


@pytest.mark.parametrize("w1,w2,tau", PARAMS)
@pytest.mark.parametrize("kind", list(Kind))
def test_knot_continuity(w1, w2, tau, kind):
    K = 6
    ps = build_fundamental(kind, w1, w2, tau, K)
    for k in range(1, K):
        left, right = ps.segment(k), ps.segment(k + 1)
        t = k * tau
        for order in range(3):
            scale = 1 + abs(right(t))
            assert abs(left(t) - right(t)) < 1e-9 * scale
            left, right = derivative(left), derivative(right)


@pytest.mark.parametrize("evaluation", ["symbolic", "taylor"])
def test_evaluator_continuity(evaluation):
    tau = 0.9
    ps = build_fundamental(Kind.X1, 0.8, 1.1, tau, 6, evaluation=evaluation)
    knots = tau * np.arange(1, 6)
    for order in range(3):
        left = ps(knots - 1e-9, order)
        right = ps(knots, order)
        np.testing.assert_allclose(left, right, atol=1e-7)


@pytest.mark.parametrize("w1,w2,tau", PARAMS)
def test_jump_at_zero(w1, w2, tau):
    x1 = build_fundamental(Kind.X1, w1, w2, tau, 2)
    x2 = build_fundamental(Kind.X2, w1, w2, tau, 2)
    # first derivative is continuous at 0, the second jumps
    assert x1(0.0, 1) == pytest.approx(0.0, abs=1e-15)
    assert x2(0.0, 1) == pytest.approx(1.0, abs=1e-15)
    assert x1(0.0, 2) - x1(-1e-9, 2) == pytest.approx(-(w1**2 + w2**2), abs=1e-12)
    assert x2(0.0, 2) - x2(-1e-9, 2) == pytest.approx(-(w1**2) * tau, abs=1e-12)


@pytest.mark.parametrize("w1,w2,tau", PARAMS)
@pytest.mark.parametrize("kind", list(Kind))
def test_exact_residual(w1, w2, tau, kind):
    K = 8
    ps = build_fundamental(kind, w1, w2, tau, K)
    t = np.linspace(0, K * tau, 801, endpoint=False)[1:]
    res = ps(t, 2) + w1**2 * ps(t) + w2**2 * ps(t - tau)
    scale = 1 + np.max(np.abs(ps(t)))
    assert np.max(np.abs(res)) < 1e-10 * scale * (1 + w1**2 + w2**2)


@pytest.mark.parametrize("w1,w2,tau", PARAMS)
@pytest.mark.parametrize("kind", [Kind.X1, Kind.X2])
def test_closed_form_matches_integral_recursion(w1, w2, tau, kind):
    ps = build_fundamental(kind, w1, w2, tau, 5)
    for k in range(1, 6):
        t = (k - 1) * tau + tau * np.linspace(0, 1, 17, endpoint=False)
        np.testing.assert_allclose(ps(t), step_by_quadrature(ps, k, t), atol=1e-10, rtol=1e-12)


@pytest.mark.parametrize("w1,w2,tau", WELL)
@pytest.mark.parametrize("kind", list(Kind))
def test_symbolic_and_taylor_agree(w1, w2, tau, kind):
    sym = build_fundamental(kind, w1, w2, tau, 8, evaluation="symbolic")
    tay = build_fundamental(kind, w1, w2, tau, 8, evaluation="taylor")
    assert sym.cancellation < CANCELLATION_LIMIT
    t = np.linspace(-tau, 8 * tau, 333, endpoint=False)
    for order in range(3):
        a, b = sym(t, order), tay(t, order)
        np.testing.assert_allclose(a, b, atol=1e-12 * (1 + np.abs(a).max()))


def test_small_omega1_switches_to_power_series():
    # 1/omega1 powers make the trig-polynomial form cancel catastrophically
    w1, w2, tau = 0.02, 2.0, 1.0
    ps = build_fundamental(Kind.X1, w1, w2, tau, 10)
    assert ps.evaluation == "taylor"
    assert ps.cancellation > 1e10
    sym = build_fundamental(Kind.X1, w1, w2, tau, 10, evaluation="symbolic")
    t = np.linspace(0, 10 * tau, 401, endpoint=False)[1:]
    res = ps(t, 2) + w1**2 * ps(t) + w2**2 * ps(t - tau)
    scale = 1 + np.abs(ps(t)).max()
    assert np.abs(res).max() < 1e-13 * scale * (1 + w2**2)
    # the symbolic tables give a visibly wrong answer here
    assert np.abs(sym(t) - ps(t)).max() > 1e-6 * scale
    # and the solution is close to the pure-delay cosine
    assert np.abs(ps(t) - delay_cosine(w2, tau, t)).max() < 0.05 * scale


def test_explicit_evaluation_choice():
    assert build_fundamental(Kind.X1, 1, 1, 1, 2, evaluation="taylor").evaluation == "taylor"
    assert build_fundamental(Kind.X1, 1, 1, 1, 2, evaluation="symbolic").evaluation == "symbolic"
    with pytest.raises(InvalidParameter):
        build_fundamental(Kind.X1, 1, 1, 1, 2, evaluation="fast")


def test_classical_second_solution():
    w1, tau = 1.5, 1.0
    x2 = build_fundamental(Kind.X2, w1, 0.0, tau, 4)
    t = np.linspace(0, 3.99, 200)
    np.testing.assert_allclose(x2(t), tau * np.cos(w1 * t) + np.sin(w1 * t) / w1, atol=1e-12)


def test_segments_in_global_time():
    ps = build_fundamental(Kind.X1, 0.8, 1.2, 0.6, 4)
    for k, seg in enumerate(ps.segments, start=1):
        t = np.linspace((k - 1) * 0.6, k * 0.6, 7, endpoint=False)
        np.testing.assert_allclose(seg(t), ps(t), atol=1e-12)
    assert ps.prelude == TrigPoly.pure([1.0])
    assert ps.horizon == pytest.approx(2.4)


def test_array_shape_and_scalar():
    ps = build_fundamental(Kind.X2, 1.0, 1.0, 1.0, 3)
    assert isinstance(ps(0.5), float)
    assert ps(np.zeros((2, 3))).shape == (2, 3)


def test_errors():
    with pytest.raises(InvalidParameter):
        build_fundamental(Kind.X1, 1.0, 1.0, 0.0, 3)
    with pytest.raises(InvalidParameter):
        build_fundamental(Kind.X1, 1.0, 1.0, 1.0, 0)
    with pytest.raises(InvalidParameter):
        build_fundamental(Kind.X1, -1.0, 1.0, 1.0, 3)
    with pytest.raises(InvalidParameter):
        build_fundamental(Kind.X1, 1.0, 1.0, 1.0, MAX_INTERVALS + 1)
    ps = build_fundamental(Kind.X1, 1.0, 1.0, 1.0, 3)
    with pytest.raises(OutOfHorizon):
        ps(3.0)
    with pytest.raises(InvalidParameter):
        ps(0.5, order=3)


def test_large_K_warns():
    with pytest.warns(RuntimeWarning):
        build_fundamental(Kind.X1, 0.5, 0.5, 0.5, 33)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        build_fundamental(Kind.X1, 0.5, 0.5, 0.5, 32)


# -- delay cosine / sine -------------------------------------------------------

def test_delay_trig_examples():
    assert delay_cosine(1, 1, -0.5) == 1.0
    assert delay_cosine(1, 1, 0.5) == pytest.approx(0.875, rel=1e-15)
    assert delay_cosine(1, 1, 1.5) == pytest.approx(1 - 1.5**2 / 2 + 0.5**4 / 24, rel=1e-15)
    assert delay_sine(1, 1, -1) == 0.0
    assert delay_sine(2, 1, -0.5) == 1.0
    assert delay_sine(1, 1, 0.5) == pytest.approx(1.5 - 0.125 / 6, rel=1e-15)
    assert delay_cosine(1, 1, -1.5) == 0.0


@pytest.mark.parametrize("omega,tau", [(0.5, 0.5), (1.0, 1.0), (2.0, 0.7)])
def test_delay_trig_continuity(omega, tau):
    for k in range(0, 8):
        t = k * tau
        for fn in (delay_cosine, delay_sine):
            left = fn(omega, tau, np.nextafter(t, -np.inf))
            assert fn(omega, tau, t) == pytest.approx(left, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
def test_delay_cosine_matches_x1(omega):
    tau = 0.5
    x1 = build_fundamental(Kind.X1, 0.0, omega, tau, 8)
    t = np.linspace(-tau, 8 * tau, 500, endpoint=False)
    np.testing.assert_allclose(x1(t), delay_cosine(omega, tau, t), atol=1e-12, rtol=1e-13)


def test_delay_trig_invalid():
    with pytest.raises(InvalidParameter):
        delay_cosine(1.0, 0.0, 0.5)
    with pytest.raises(InvalidParameter):
        delay_sine(-1.0, 1.0, 0.5)
    assert math.isclose(delay_sine(0.0, 1.0, 3.0), 0.0)
