import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import integrate

from vortex_born.errors import DomainError
from vortex_born.special import (
    KernelArgs,
    azimuthal_power_mean,
    bessel_i0,
    bessel_i0e,
    bessel_j,
    closed_central,
    kernel_im,
    kernel_im_closed,
    kernel_values,
)


def j_series(m, x, terms=60):
    return sum((-1) ** k * (x / 2) ** (2 * k + m) / (math.factorial(k) * math.factorial(k + m)) for k in range(terms))


def i0_series(x, terms=60):
    term, total = 1.0, 1.0
    for k in range(1, terms):
        term *= (x / 2) ** 2 / k**2
        total += term
    return total


def kernel_quad_oracle(power, m, alpha, beta, kb=0.0, chi=0.0):
    def f(psi, part):
        val = np.exp(1j * (m * psi + kb * np.cos(psi + chi))) / (alpha - beta * np.cos(psi)) ** power
        return val.real if part == 0 else val.imag
    re = integrate.quad(f, 0, 2 * math.pi, args=(0,), limit=400, epsabs=1e-14, epsrel=1e-13)[0]
    im = integrate.quad(f, 0, 2 * math.pi, args=(1,), limit=400, epsabs=1e-14, epsrel=1e-13)[0]
    return (re + 1j * im) / (2 * math.pi)


class TestBesselJ:
    def test_values(self):
        assert bessel_j(0, 0.0) == 1.0
        assert bessel_j(3, 0.0) == 0.0

    def test_first_zero_against_series_bisection(self):
        lo, hi = 2.0, 3.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if j_series(0, lo) * j_series(0, mid) <= 0:
                hi = mid
            else:
                lo = mid
        assert lo == pytest.approx(2.4048256, abs=1e-7)
        assert abs(bessel_j(0, 2.4048256)) < 1e-6

    @pytest.mark.parametrize("m", [0, 1, 2, 5, 10])
    @pytest.mark.parametrize("x", [0.3, 1.0, 4.7, 12.0])
    def test_against_power_series(self, m, x):
        assert bessel_j(m, x) == pytest.approx(j_series(m, x, 80), abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(-40, 40), st.floats(0, 1000))
    def test_negative_order_parity(self, m, x):
        assert bessel_j(-m, x) == (-1) ** (m % 2) * bessel_j(m, x)

    def test_high_order(self):
        # large order needed for m = 100 beams: J_100(x) is tiny below x ~ 80
        assert 0 < bessel_j(100, 50.0) < 1e-12
        assert abs(bessel_j(100, 120.0)) < 0.1

    def test_vectorised(self):
        np.testing.assert_allclose(bessel_j(1, np.array([0.0, 1.0])), [0.0, 0.44005058574493355], atol=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            bessel_j(513, 1.0)
        with pytest.raises(DomainError):
            bessel_j(1, float("nan"))
        with pytest.raises(DomainError):
            bessel_j(1, float("inf"))


class TestBesselI0:
    def test_values(self):
        assert bessel_i0(0.0) == 1.0
        assert bessel_i0(1.0) == pytest.approx(1.2660659, rel=1e-7)
        assert bessel_i0(10.0) == pytest.approx(2815.7167, rel=1e-7)
        assert bessel_i0(10.0) == pytest.approx(i0_series(10.0), rel=1e-13)

    def test_scaled_path_continuous(self):
        below, above = bessel_i0(30.0 - 1e-9), bessel_i0(30.0 + 1e-9)
        assert above == pytest.approx(below, rel=1e-8)
        assert bessel_i0(45.0) == pytest.approx(i0_series(45.0, 200), rel=1e-12)

    def test_overflow(self):
        assert math.isfinite(bessel_i0(700.0))
        with pytest.raises(OverflowError):
            bessel_i0(700.5)

    def test_scaled(self):
        assert bessel_i0e(1e6) == pytest.approx(1 / math.sqrt(2 * math.pi * 1e6), rel=1e-6)
        with pytest.raises(DomainError):
            bessel_i0e(-1.0)


class TestKernel:
    def test_constant_denominator(self):
        assert kernel_im(KernelArgs(1, 0, 2.0, 0.0)) == pytest.approx(0.5, abs=1e-15)
        assert kernel_im(KernelArgs(1, 0, 4.0, 0.0)) == pytest.approx(0.25, abs=1e-15)

    def test_central_closed_values(self):
        assert kernel_im_closed(KernelArgs(1, 0, 2.0, 1.0)) == pytest.approx(1 / math.sqrt(3), rel=1e-14)
        val = kernel_im(KernelArgs(1, 1, 2.0, 1.0))
        assert val.imag == 0.0
        assert val.real == pytest.approx(0.1547005, abs=5e-8)
        assert val == pytest.approx(kernel_quad_oracle(1, 1, 2.0, 1.0), rel=1e-12)

    def test_forward_closed_value(self):
        args = KernelArgs(1, 2, 3.0, 0.0, kb=1.5, chi=0.0)
        val = kernel_im(args)
        expected = -j_series(2, 1.5) / 3
        assert val.real == pytest.approx(expected, rel=1e-12)
        assert val.real == pytest.approx(-0.0773626, rel=1e-6)
        assert val == pytest.approx(kernel_quad_oracle(1, 2, 3.0, 0.0, 1.5), rel=1e-12)

    @pytest.mark.parametrize("m", [1, 3, -1])
    def test_forward_phase_odd_m(self, m):
        # odd m fixes the sign convention of the phase: i^m, not (-i)^m
        args = KernelArgs(1, m, 2.5, 0.0, kb=2.0, chi=0.4)
        oracle = kernel_quad_oracle(1, m, 2.5, 0.0, 2.0, 0.4)
        assert kernel_im_closed(args) == pytest.approx(oracle, rel=1e-12)
        assert abs(kernel_im_closed(args)) == pytest.approx(abs(bessel_j(m, 2.0)) / 2.5, rel=1e-12)

    def test_unavailable(self):
        assert kernel_im_closed(KernelArgs(1, 1, 2.0, 1.0, kb=0.5)) is None

    @settings(max_examples=50, deadline=None)
    @given(st.sampled_from([1, 2]), st.integers(-6, 6), st.floats(0.05, 50), st.floats(0.0, 0.98))
    def test_central_closed_vs_quadrature(self, power, m, alpha, ratio):
        args = KernelArgs(power, m, alpha, ratio * alpha)
        closed = kernel_im_closed(args)
        quad = kernel_im(args, method="quadrature")
        # absolute floor: round-off where the closed form underflows or is exactly 0
        assert abs(quad - closed) <= 1e-10 * abs(closed) + 1e-15 / alpha**power

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from([1, 2]), st.integers(-5, 5), st.floats(0.5, 5), st.floats(0.0, 0.9),
           st.floats(0.0, 8.0), st.floats(-3.0, 3.0))
    def test_general_quadrature_vs_scipy(self, power, m, alpha, ratio, kb, chi):
        val = kernel_im(KernelArgs(power, m, alpha, ratio * alpha, kb, chi), method="quadrature")
        oracle = kernel_quad_oracle(power, m, alpha, ratio * alpha, kb, chi)
        assert abs(val - oracle) <= 1e-10 * max(abs(oracle), 1e-3 / alpha**power)

    @pytest.mark.parametrize("m", [1, 2, 3])
    @pytest.mark.parametrize("kb", [0.0, 0.7, 4.0])
    def test_reflection_symmetry(self, m, kb):
        plus = kernel_im(KernelArgs(1, m, 2.0, 1.2, kb, 0.0), method="quadrature")
        minus = kernel_im(KernelArgs(1, -m, 2.0, 1.2, kb, 0.0), method="quadrature")
        assert plus == pytest.approx(minus, rel=1e-12)
        if kb == 0.0:
            assert plus == pytest.approx(minus.conjugate(), rel=1e-12)

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_small_beta_power_law(self, m):
        alpha = 2.0
        beta = alpha * np.geomspace(1e-4, 1e-2, 7)
        vals = np.abs(closed_central(1, m, alpha, beta))
        slope = np.polyfit(np.log(beta), np.log(vals), 1)[0]
        assert slope == pytest.approx(abs(m), rel=0.01)
        assert vals[0] == pytest.approx((beta[0] / (2 * alpha)) ** m / alpha, rel=1e-3)

    @pytest.mark.parametrize("m", [0, 1, 2])
    @pytest.mark.parametrize("kb", [0.0, 1.3])
    def test_power_two_is_minus_alpha_derivative(self, m, kb):
        alpha, beta, chi = 2.3, 1.1, 0.5
        h = 1e-5 * alpha
        up = kernel_im(KernelArgs(1, m, alpha + h, beta, kb, chi), method="quadrature")
        dn = kernel_im(KernelArgs(1, m, alpha - h, beta, kb, chi), method="quadrature")
        second = kernel_im(KernelArgs(2, m, alpha, beta, kb, chi))
        assert -(up - dn) / (2 * h) == pytest.approx(second, rel=1e-6)

    def test_batch_dispatch(self):
        alpha = np.array([2.0, 3.0, 4.0])
        beta = np.array([1.0, 0.5, 3.9])
        central = kernel_values(2, 1, alpha, beta, 0.0, 0.0)
        quad = kernel_values(2, 1, alpha, beta, np.array([0.0, 1e-300, 0.0]), 0.0)
        np.testing.assert_allclose(central, quad, rtol=1e-10)

    @pytest.mark.parametrize("kw", [
        dict(power=3, m=0, alpha=2.0, beta=1.0),
        dict(power=1, m=0, alpha=1.0, beta=1.0),
        dict(power=1, m=0, alpha=1.0, beta=-0.5),
        dict(power=1, m=0, alpha=2.0, beta=1.0, kb=-1.0),
    ])
    def test_args_validation(self, kw):
        with pytest.raises(DomainError):
            KernelArgs(**kw)

    def test_method_validation(self):
        with pytest.raises(ValueError):
            kernel_im(KernelArgs(1, 0, 2.0, 1.0), method="series")


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_azimuthal_power_mean(p):
    alpha, beta = 1.7, 1.2
    oracle = integrate.quad(lambda psi: (alpha - beta * np.cos(psi)) ** -p, 0, 2 * math.pi, epsrel=1e-13)[0]
    assert azimuthal_power_mean(p, alpha, beta) == pytest.approx(oracle / (2 * math.pi), rel=1e-12)
