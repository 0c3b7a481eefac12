import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evmirror import specfun
from evmirror.errors import DomainError

# Reference values: mpmath at 40 digits, frozen.
LNGAMMA_REF = [
    (1 + 3j, -3.2441442995897561916, 1.0533507710686132003),
    (0.5 + 0.5j, 0.11238724280962311252, -0.75072920212205074465),
    (3.7 - 2.2j, 0.72644675162442647431, -2.7180642924411456664),
    (-2.5 + 0.1j, -0.10314924404281920289, -9.314444268359838115),
    (10 + 40j, -26.780956023147975363, 121.36097759201601726),
    (0.1 + 150j, -236.70476433700015053, 600.96672002754179469),
]
DIGAMMA_REF = [
    (0.5 + 0.5j, -0.86810736264547731395, 1.4406595199775145927),
    (3.7 - 2.2j, 1.3576969420395713574, -0.5997294051758555323),
    (-2.5 + 0.1j, 1.1036973777788084095, 0.92269929145859890393),
    (10 + 40j, 3.7162938427531848141, 1.3376054399965465189),
]
ARG_REF = {
    0.3: -0.16282067216785568217,
    1.0: -0.30164032046753319789,
    3.0: 1.0533507710686132003,
    10.0: 13.802912974229900694,
    50.0: 146.38488174591332191,
}
REPSI_REF = {
    0.3: -0.4767548933874727769,
    1.0: 0.094650320622476977272,
    3.0: 1.1079807107101508808,
    10.0: 2.3034192636714125352,
    50.0: 3.9120563400950668003,
}
K_REF = [
    (0.0, 1.0, 0.42102443824070833334),
    (1.0, 0.5, 0.48339609004387797407),
    (3.0, 0.01, -0.012297294234570473077),
    (3.0, 5.0, 0.0015891029050314698599),
    (0.5, 14.0, 2.737635426844982743e-7),
    (8.0, 20.0, 1.180967747923504366e-10),
    (20.0, 5.0, -8.2646568034237979036e-15),
    (20.0, 30.0, 2.3367689472259342889e-17),
    (1.0, 40.0, 8.2898597457374828274e-19),
]


@pytest.mark.parametrize("w,re,im", LNGAMMA_REF)
def test_ln_gamma_reference_values(w, re, im):
    got = specfun.ln_gamma_complex(w)
    scale = max(1.0, abs(complex(re, im)))
    assert abs(got.real - re) <= 1e-13 * scale
    assert abs(got.imag - im) <= 1e-13 * scale


def test_ln_gamma_trivial_points():
    assert specfun.ln_gamma_complex(1.0) == pytest.approx(0.0, abs=1e-15)
    assert specfun.ln_gamma_complex(2.0) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("w", [0.0, -1.0, -7.0, complex(-3, 0)])
def test_ln_gamma_pole_is_reported(w):
    with pytest.raises(DomainError, match="pole"):
        specfun.ln_gamma_complex(w)


@pytest.mark.parametrize("w,re,im", DIGAMMA_REF)
def test_digamma_reference_values(w, re, im):
    got = specfun.digamma_complex(w)
    assert abs(got - complex(re, im)) <= 1e-13 * max(1.0, abs(complex(re, im)))


@pytest.mark.parametrize("alpha", sorted(ARG_REF))
def test_arg_gamma_reference(alpha):
    assert specfun.arg_gamma_1i(alpha) == pytest.approx(ARG_REF[alpha], abs=1e-13 * max(1, ARG_REF[alpha]))


def test_arg_gamma_at_zero():
    assert specfun.arg_gamma_1i(0.0) == 0.0


def test_arg_gamma_rejects_negative():
    with pytest.raises(DomainError):
        specfun.arg_gamma_1i(-0.5)


@pytest.mark.parametrize("alpha", [30.0, 100.0, 400.0])
def test_arg_gamma_stirling_form(alpha):
    stirling = alpha * math.log(alpha) - alpha + math.pi / 4 - 1.0 / (12 * alpha)
    assert specfun.arg_gamma_1i(alpha) == pytest.approx(stirling, abs=1.0 / alpha**3)


def test_arg_gamma_continuity_grid():
    a = np.arange(0.0, 50.0 + 5e-4, 1e-3)
    g = specfun.arg_gamma_1i(a)
    jumps = np.abs(np.diff(g))
    local_slope = np.abs(np.log(np.maximum(a[1:], 1e-3))) * 1e-3 + 1e-3
    assert np.all(jumps <= 10 * local_slope)


def test_abs_gamma_limits_and_identity():
    assert specfun.abs_gamma_1i(0.0) == 1.0
    assert specfun.abs_gamma_1i(1.0) == pytest.approx(math.sqrt(math.pi / math.sinh(math.pi)), rel=1e-15)
    for a in (0.01, 0.1, 1.0, 3.0, 5.0, 10.0, 80.0):
        via_lngamma = math.exp(specfun.ln_gamma_complex(1 + 1j * a).real)
        assert specfun.abs_gamma_1i(a) == pytest.approx(via_lngamma, rel=1e-12)


def test_abs_gamma_large_alpha_does_not_overflow():
    v = specfun.abs_gamma_1i(400.0)
    assert 0 < v < 1e-250


@pytest.mark.parametrize("alpha", sorted(REPSI_REF))
def test_re_digamma_reference(alpha):
    assert specfun.re_digamma_1i(alpha) == pytest.approx(REPSI_REF[alpha], abs=1e-12)


def test_re_digamma_at_zero_is_minus_euler():
    assert specfun.re_digamma_1i(0.0) == pytest.approx(-0.5772156649015329, abs=1e-15)


def test_re_digamma_large_alpha_tends_to_log():
    assert abs(specfun.re_digamma_1i(100.0) - math.log(100.0)) < 1e-3


@pytest.mark.parametrize("alpha", [0.2, 1.0, 4.0, 15.0])
def test_re_digamma_matches_finite_difference_of_ln_gamma(alpha):
    h = 1e-5
    w = 1 + 1j * alpha
    fd = (specfun.ln_gamma_complex(w + h).real - specfun.ln_gamma_complex(w - h).real) / (2 * h)
    # central differences in double precision bottom out near 1e-10
    assert specfun.re_digamma_1i(alpha) == pytest.approx(fd, abs=1e-9)


def test_bessel_i_reference_and_report():
    v, rep = specfun.bessel_i_imag_order(2.0, 1.0)
    ref = complex(-0.30760240414883722754, -6.8706518846869085698)
    assert abs(v - ref) <= 1e-13 * abs(ref)
    assert rep.method == "series"
    assert rep.terms_used >= 1
    assert rep.est_abs_error >= 0
    v, _ = specfun.bessel_i_imag_order(0.5, 5.0)
    ref = complex(28.025853684631220894, -0.002642534858231323429)
    assert abs(v - ref) <= 1e-13 * abs(ref)


def test_bessel_i_small_argument_order_zero():
    v, _ = specfun.bessel_i_imag_order(0.0, 1e-8)
    assert v == pytest.approx(1.0, abs=1e-15)


def test_bessel_i_large_argument_growth():
    v, _ = specfun.bessel_i_imag_order(1.0, 30.0)
    assert abs(v) == pytest.approx(math.exp(30) / math.sqrt(2 * math.pi * 30), rel=0.05)


def test_bessel_i_negative_order_is_conjugate():
    v, _ = specfun.bessel_i_imag_order(1.7, 3.2)
    w, _ = specfun.bessel_i_imag_order(1.7, 3.2, negative_order=True)
    assert w == v.conjugate()


@pytest.mark.parametrize("u", [0.0, -1.0, math.inf])
def test_bessel_rejects_bad_argument(u):
    with pytest.raises(DomainError):
        specfun.bessel_i_imag_order(1.0, u)
    with pytest.raises(DomainError):
        specfun.bessel_k_imag_order(1.0, u)


@pytest.mark.parametrize("alpha,u,ref", K_REF)
def test_bessel_k_reference_values(alpha, u, ref):
    v, rep = specfun.bessel_k_imag_order(alpha, u)
    assert isinstance(v, float)
    assert v == pytest.approx(ref, rel=1e-12)
    assert rep.method in ("series", "integral")


def test_bessel_k_matches_i_series_at_small_u():
    i, _ = specfun.bessel_i_imag_order(3.0, 0.01)
    k, _ = specfun.bessel_k_imag_order(3.0, 0.01)
    assert k == pytest.approx(-i.imag * math.pi / math.sinh(3 * math.pi), rel=1e-12)


def test_bessel_k_large_u_asymptote():
    k, rep = specfun.bessel_k_imag_order(1.0, 40.0)
    assert rep.method == "integral"
    assert k == pytest.approx(math.sqrt(math.pi / 80.0) * math.exp(-40.0), rel=0.03)


def test_bessel_k_auto_switch_point():
    assert specfun.bessel_k_imag_order(0.0, 12.0)[1].method == "series"
    assert specfun.bessel_k_imag_order(0.0, 12.5)[1].method == "integral"


def test_bessel_k_paths_agree_on_overlap():
    for a in np.linspace(0.0, 8.0, 9):
        for u in np.linspace(8.0, 16.0, 9):
            s = specfun.bessel_k_imag_order(a, u, method="series")[0]
            i = specfun.bessel_k_imag_order(a, u, method="integral")[0]
            assert abs(s - i) <= 1e-9 * abs(i)


def test_bessel_k_unknown_method():
    with pytest.raises(ValueError):
        specfun.bessel_k_imag_order(1.0, 1.0, method="magic")


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 20.0), st.floats(0.01, 30.0))
def test_bessel_k_against_mpmath(alpha, u):
    with mpmath.workdps(40):
        ref = float(mpmath.besselk(1j * alpha, u).real)
        env = float(mpmath.besselk(0, u))
    got = specfun.bessel_k_imag_order(alpha, u)[0]
    # zeros of K in the oscillatory region make a pure relative test meaningless
    scale = max(abs(ref), 1e-6 * env * math.exp(-math.pi * alpha / 2))
    assert abs(got - ref) <= 1e-9 * scale


@settings(max_examples=60, deadline=None)
@given(st.floats(-30.0, 30.0), st.floats(-60.0, 60.0))
def test_ln_gamma_conjugate_symmetry(x, y):
    w = complex(x, y)
    if abs(w - round(x)) < 1e-3 and round(x) <= 0:
        return
    a = specfun.ln_gamma_complex(w)
    b = specfun.ln_gamma_complex(w.conjugate())
    diff = a.conjugate() - b
    if y == 0 and x < 0:
        # on the branch cut the two sides differ by a multiple of 2 pi i
        diff = complex(diff.real, math.remainder(diff.imag, 2 * math.pi))
    assert abs(diff) <= 1e-12 * max(1.0, abs(a))


@settings(max_examples=60, deadline=None)
@given(st.floats(0.5, 40.0), st.floats(-40.0, 40.0))
def test_ln_gamma_recurrence(x, y):
    w = complex(x, y)
    lhs = specfun.ln_gamma_complex(w + 1)
    rhs = specfun.ln_gamma_complex(w) + np.log(w)
    # equal modulo 2 pi i; on Re w > 0 the branches coincide
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 10.0), st.floats(0.01, 10.0))
def test_i_conjugate_symmetry_from_separate_sums(alpha, u):
    c = specfun._i_series(alpha, u)[0].conjugate()
    m = specfun._i_series(-alpha, u)[0]
    assert abs(m.real - c.real) <= 1e-13 * abs(c)
    assert abs(m.imag - c.imag) <= 1e-13 * abs(c)


def test_vectorised_inputs():
    a = np.array([0.0, 0.5, 2.0])
    assert specfun.arg_gamma_1i(a).shape == (3,)
    assert specfun.re_digamma_1i(a).shape == (3,)
    assert specfun.abs_gamma_1i(a).shape == (3,)
    assert specfun.ln_gamma_complex(np.array([1 + 1j, 2 + 0.5j])).shape == (2,)
