"""Twisted-packet scattering observables in the generalized Born approximation.

Kinematics. The packet moves along z with mean longitudinal momentum
``p_i``; its plane-wave components have transverse momenta ``k`` of
azimuth ``phi_k``. The outgoing electron has polar/azimuthal angles
``(theta, phi)`` and momentum modulus ``p_f = sqrt(p_i^2 + kappa0^2)``,
fixed per beam, for every ``k`` (elastic scattering of the mean cone
component). The momentum transfer is ``Q = p_f n(theta, phi) - p_i e_z`` and
the Born amplitude is evaluated at ``(Q - k)^2``.

With ``f(q^2) = sum_n c_n / (lam0 + lam1 q^2)^n`` (see
:mod:`vortex_born.potentials`) and ``psi = phi_k - phi`` the denominator is
``alpha - beta cos(psi)`` with

    alpha = lam0 + lam1 (Q^2 + k^2),    beta = 2 lam1 k Q_perp .

Targets: a single potential at impact parameter ``b``; a mesoscopic
Gaussian cloud of centres (``b0``, ``sigma_b``); an infinitely wide
(macroscopic) incoherent target.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .beams import MUCH_LESS, luminosity, weight
from .errors import DomainError, Infeasible, RegimeWarning
from .potentials import Hydrogen1s, Yukawa, born_amplitude
from .quadrature import (
    DEFAULT_BUDGET,
    Diagnostics,
    composite_gauss_legendre,
    halfline_window,
    integrate_halfline,
    integrate_periodic,
    integrate_sphere,
)
from .special import azimuthal_power_mean, bessel_i0e, bessel_j, closed_central, closed_forward
from .units import ELECTRON_MASS

#: Global cap on pair-angle products for the mesoscopic quadrature.
MESOSCOPIC_EVALUATION_CAP = 2**24


@dataclass(frozen=True)
class SinglePotential:
    b: float = 0.0
    phi_b: float = 0.0

    def __post_init__(self):
        if self.b < 0:
            raise DomainError("impact parameter b must be non-negative")


@dataclass(frozen=True)
class MesoscopicGaussian:
    b0: float
    sigma_b: float
    phi_b0: float = 0.0

    def __post_init__(self):
        if self.b0 < 0:
            raise DomainError("b0 must be non-negative")
        if not self.sigma_b > 0:
            raise DomainError("sigma_b must be positive")


@dataclass(frozen=True)
class Macroscopic:
    pass


@dataclass(frozen=True)
class Direction:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError("theta must lie in [0, pi]")


# -- kinematics -----------------------------------------------------------------

def _transfer(beam, theta):
    """Return (Q^2, Q_perp, Q_z) for outgoing polar angle(s) theta."""
    theta = np.asarray(theta, dtype=float)
    q_perp = beam.p_f * np.sin(theta)
    q_z = beam.p_f * np.cos(theta) - beam.p_i
    return q_perp**2 + q_z**2, q_perp, q_z


def q_squared(beam, direction, k_perp, phi_k):
    """``(Q - k_perp)^2`` for a plane-wave component ``k_perp (cos phi_k, sin phi_k, 0)``."""
    if np.any(np.asarray(k_perp) < 0):
        raise DomainError("k_perp must be non-negative")
    _, q_perp, q_z = _transfer(beam, direction.theta)
    k_perp = np.asarray(k_perp, dtype=float)
    val = q_perp**2 + q_z**2 + k_perp**2 - 2.0 * k_perp * q_perp * np.cos(phi_k - direction.phi)
    return np.maximum(val, 0.0)[()] if np.ndim(val) == 0 else np.maximum(val, 0.0)


def _alpha_beta(pot, beam, theta, k):
    lam0, lam1, _ = pot.rational_form()
    q2, q_perp, _ = _transfer(beam, theta)
    alpha = lam0 + lam1 * (q2 + k**2)
    beta = 2.0 * lam1 * k * q_perp
    return alpha, beta


def _f_of_denominator(terms, w):
    return sum(c / w**n for n, c in terms)


def twisted_kernel(pot, m, alpha, beta, kb, chi, budget=DEFAULT_BUDGET, diag=None):
    """``sum_n c_n I_m^(n)(alpha, beta, kb, chi)``, the azimuthal average of
    ``f(Q - k) exp(i m psi + i k.b)``, batched over array arguments.

    Closed forms are used when every element has ``kb = 0`` or ``beta = 0``;
    otherwise one trapezoid quadrature covers all terms.
    """
    _, _, terms = pot.rational_form()
    alpha, beta, kb = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (alpha, beta, kb)))
    if np.any(alpha <= beta):
        raise DomainError("alpha must exceed beta")
    if np.all(kb == 0.0):
        return sum(c * closed_central(n, m, alpha, beta) for n, c in terms).astype(complex)
    if np.all(beta == 0.0):
        return sum(c * closed_forward(n, m, alpha, kb, chi) for n, c in terms)
    shape = alpha.shape
    a = alpha.reshape(-1, 1)
    b = beta.reshape(-1, 1)
    x = kb.reshape(-1, 1)
    hint = abs(int(m)) + int(math.ceil(float(np.max(kb))))

    def integrand(psi):
        return np.exp(1j * (m * psi + x * np.cos(psi + chi))) * _f_of_denominator(terms, a - b * np.cos(psi))

    res = integrate_periodic(integrand, hint, budget, diag)
    return np.asarray(res.value).reshape(shape)


# -- single potential -------------------------------------------------------------

def amplitude_f_twisted(beam, pot, target, direction, budget=DEFAULT_BUDGET, diag=None):
    """Twisted amplitude ``F(Q, b)`` (length units) for one scattering centre.

    ``F = (-i)^m e^{i m phi} / sqrt(2 pi) * int_0^inf g(k) sqrt(k) K(k) dk`` with
    ``K`` the potential's twisted kernel at ``kb = k b`` and ``chi = phi - phi_b``.
    """
    if not isinstance(target, SinglePotential):
        raise TypeError("amplitude_f_twisted needs a SinglePotential target")
    m = beam.m
    chi = direction.phi - target.phi_b

    def integrand(k):
        alpha, beta = _alpha_beta(pot, beam, direction.theta, k)
        kern = twisted_kernel(pot, m, alpha, beta, k * target.b, chi, budget, diag)
        return weight(beam, k) * np.sqrt(k) * kern

    val = integrate_halfline(integrand, beam.kappa0, beam.sigma_kappa, budget, diag).value
    prefactor = (-1j) ** (m % 4) * np.exp(1j * m * direction.phi) / math.sqrt(2.0 * math.pi)
    return complex(prefactor * val)


def events_single(beam, pot, target, direction, budget=DEFAULT_BUDGET, diag=None):
    """Number of events per solid angle ``(N_e / cos theta_k) |F(Q, b)|^2``."""
    amp = amplitude_f_twisted(beam, pot, target, direction, budget, diag)
    return beam.n_electrons / math.cos(beam.theta_k) * abs(amp) ** 2


def events_single_wide(beam, pot, target, direction, budget=DEFAULT_BUDGET, diag=None):
    """Wide-packet events ``L |K(kappa0)|^2``: the kernel taken at ``k = kappa0``.

    Uses the closed kernel forms at ``b = 0`` or ``theta = 0``.
    """
    if not isinstance(target, SinglePotential):
        raise TypeError("events_single_wide needs a SinglePotential target")
    if beam.kappa0 == 0.0 and beam.m != 0:
        # the ring collapses to k = 0: the kernel is the mean of e^{i m psi}
        if diag is not None:
            diag.flag("degenerate: kappa0 = 0 with m != 0, amplitude is exactly zero")
        return 0.0
    alpha, beta = _alpha_beta(pot, beam, direction.theta, beam.kappa0)
    kern = twisted_kernel(pot, beam.m, alpha, beta, beam.kappa0 * target.b,
                          direction.phi - target.phi_b, budget, diag)
    return luminosity(beam, budget, diag) * float(abs(kern)) ** 2


def cross_section_single(beam, pot, target, direction, budget=DEFAULT_BUDGET, diag=None):
    """Cross section for a centre at impact parameter b: events divided by luminosity."""
    return events_single(beam, pot, target, direction, budget, diag) / luminosity(beam, budget, diag)


def plane_wave_dcs_at_transfer(beam, pot, theta):
    """``|f(Q^2)|^2`` with the beam's actual momentum transfer."""
    q2, _, _ = _transfer(beam, theta)
    return born_amplitude(pot, q2) ** 2


def cross_section_single_factorized(beam, pot, target, direction):
    """Small-``kappa0`` approximation ``dsigma_PW/dOmega * J_m(kappa0 b)^2``."""
    return float(plane_wave_dcs_at_transfer(beam, pot, direction.theta)
                 * bessel_j(beam.m, beam.kappa0 * target.b) ** 2)


# -- macroscopic target -----------------------------------------------------------

def _mean_f_squared(pot, alpha, beta):
    # azimuthal mean of f^2 = sum_{n,n'} c_n c_n' <w^-(n+n')>
    _, _, terms = pot.rational_form()
    return sum(c1 * c2 * azimuthal_power_mean(n1 + n2, alpha, beta)
               for n1, c1 in terms for n2, c2 in terms)


def _closed_uv(beam, theta, lam0, lam1):
    """Wide-packet (u, u - v, v) computed from the angles directly."""
    theta = np.asarray(theta, dtype=float)
    tk = beam.theta_k
    pf2 = beam.p_f**2
    v = 2.0 * lam1 * pf2 * np.sin(theta) * math.sin(tk)
    d = lam0 + 4.0 * lam1 * pf2 * np.sin(0.5 * (theta - tk)) ** 2
    return d + v, d, v


def yukawa_macroscopic_closed(beam, pot, theta):
    """``(2 m V0)^2 / cos(theta_k) * u / (u^2 - v^2)^{3/2}`` with
    ``u = Q^2 + kappa0^2 + mu^2``, ``v = 2 kappa0 Q_perp``."""
    u, d, v = _closed_uv(beam, theta, pot.mu**2, 1.0)
    s2 = d * (u + v)
    return (2.0 * ELECTRON_MASS * pot.V0) ** 2 / math.cos(beam.theta_k) * u / s2**1.5


def hydrogen_macroscopic_closed(beam, pot, theta):
    """Hydrogen wide-packet macroscopic cross section, derivative operator expanded.

    ``a0^2 / (4 cos theta_k) (-d_u + d_u^2 - d_u^3 / 6) (u^2 - v^2)^{-1/2}``
    equals ``a0^2 / (4 cos theta_k)`` times

        u / s^3 + (2u^2 + v^2) / s^5 + u (2u^2 + 3v^2) / (2 s^7),  s^2 = u^2 - v^2,

    with ``u = 1 + a0^2 p_f^2 (1 - cos theta cos theta_k) / 2`` and
    ``v = a0^2 p_f^2 sin theta sin theta_k / 2``.
    """
    u, d, v = _closed_uv(beam, theta, 1.0, pot.a0**2 / 4.0)
    s2 = d * (u + v)
    s = np.sqrt(s2)
    bracket = u / (s2 * s) + (2.0 * u * u + v * v) / (s2 * s2 * s) + u * (2.0 * u * u + 3.0 * v * v) / (2.0 * s2**3 * s)
    return pot.a0**2 / (4.0 * math.cos(beam.theta_k)) * bracket


def dcs_macroscopic_closed(beam, pot, theta):
    if isinstance(pot, Yukawa):
        return yukawa_macroscopic_closed(beam, pot, theta)
    if isinstance(pot, Hydrogen1s):
        return hydrogen_macroscopic_closed(beam, pot, theta)
    raise TypeError(f"no closed form for {pot!r}")


def dcs_macroscopic_array(beam, pot, theta, method="general", budget=DEFAULT_BUDGET, diag=None):
    """Averaged cross section of a macroscopic target, vectorised over ``theta``.

    ``general``  -- |g|^2-weighted k-integral of the azimuthal mean of f^2
    ``wide``     -- azimuthal mean of f^2 at k = kappa0 by periodic quadrature
    ``closed``   -- analytic wide-packet forms for Yukawa and hydrogen
    """
    theta = np.asarray(theta, dtype=float)
    inv_cos = 1.0 / math.cos(beam.theta_k)
    if method == "closed":
        return dcs_macroscopic_closed(beam, pot, theta)
    if method == "wide":
        _, _, terms = pot.rational_form()
        alpha, beta = _alpha_beta(pot, beam, theta, beam.kappa0)
        a = alpha.reshape(-1, 1)
        b = beta.reshape(-1, 1)

        def integrand(psi):
            return _f_of_denominator(terms, a - b * np.cos(psi)) ** 2

        res = integrate_periodic(integrand, 0, budget, diag)
        return inv_cos * np.asarray(res.value).reshape(theta.shape)
    if method == "general":
        th = theta.reshape(-1, 1)

        def integrand(k):
            alpha, beta = _alpha_beta(pot, beam, th, k)
            return weight(beam, k) ** 2 * _mean_f_squared(pot, alpha, beta)

        res = integrate_halfline(integrand, beam.kappa0, beam.sigma_kappa, budget, diag)
        return inv_cos * np.asarray(res.value).reshape(theta.shape)
    raise ValueError(f"unknown method {method!r}")


def dcs_macroscopic(beam, pot, direction, budget=DEFAULT_BUDGET, method="general", diag=None):
    """Averaged cross section for a macroscopic target (independent of m and phi)."""
    return float(dcs_macroscopic_array(beam, pot, direction.theta, method, budget, diag))


def total_macroscopic(beam, pot, budget=DEFAULT_BUDGET, method="wide", diag=None):
    """Solid-angle integral of :func:`dcs_macroscopic`; equals sigma_pl(p_f) / cos(theta_k)
    in the wide-packet limit."""
    res = integrate_sphere(lambda th, ph: dcs_macroscopic_array(beam, pot, th, method, budget), budget, diag)
    return res.value


# -- superposition of two OAM states ----------------------------------------------

def superposition_moments(sup, pot, theta, budget=DEFAULT_BUDGET, diag=None):
    """Return ``(dsigma_bar, A)`` at polar angle(s) theta for a wide superposition.

    Both come from one periodic quadrature of ``f^2`` and
    ``f^2 cos(delta_m psi)`` at ``k = kappa0``.
    """
    beam = sup.base
    theta = np.asarray(theta, dtype=float)
    _, _, terms = pot.rational_form()
    alpha, beta = _alpha_beta(pot, beam, theta, beam.kappa0)
    a = alpha.reshape(-1, 1, 1)
    b = beta.reshape(-1, 1, 1)
    dm = sup.delta_m
    harmonics = np.array([0.0, float(dm)]).reshape(1, 2, 1)

    def integrand(psi):
        f2 = _f_of_denominator(terms, a - b * np.cos(psi)) ** 2
        return f2 * np.cos(harmonics * psi)

    res = integrate_periodic(integrand, abs(dm), budget, diag)
    vals = np.asarray(res.value).reshape(theta.shape + (2,))
    mean, harm = vals[..., 0], vals[..., 1]
    dcs = mean / math.cos(beam.theta_k)
    asym = 2.0 * sup.c1_abs * sup.c2_abs * harm / mean
    return dcs, asym


def asymmetry_a(sup, pot, theta, budget=DEFAULT_BUDGET, diag=None):
    """Azimuthal asymmetry parameter A(theta; theta_k)."""
    _, asym = superposition_moments(sup, pot, theta, budget, diag)
    return float(asym) if np.ndim(asym) == 0 else asym


def dcs_superposition_array(sup, pot, theta, phi, budget=DEFAULT_BUDGET, diag=None):
    dcs, asym = superposition_moments(sup, pot, theta, budget, diag)
    phase = sup.delta_m * (np.asarray(phi) - 0.5 * math.pi) + sup.delta_alpha
    return dcs * (1.0 + asym * np.cos(phase))


def dcs_superposition(sup, pot, direction, budget=DEFAULT_BUDGET, diag=None):
    """``dsigma_bar (1 + A cos(delta_m (phi - pi/2) + delta_alpha))``."""
    return float(dcs_superposition_array(sup, pot, direction.theta, direction.phi, budget, diag))


def total_superposition(sup, pot, budget=DEFAULT_BUDGET, diag=None):
    res = integrate_sphere(lambda th, ph: dcs_superposition_array(sup, pot, th, ph, budget), budget, diag)
    return res.value


# -- mesoscopic target ------------------------------------------------------------

def _warn_regime(message):
    warnings.warn(message, RegimeWarning, stacklevel=3)


def events_mesoscopic(beam, pot, target, direction, budget=DEFAULT_BUDGET, diag=None):
    """Events for a Gaussian cloud of centres, full four-fold integral.

    The k and k' integrals use composite Gauss-Legendre nodes; the two
    azimuthal integrals are trapezoid sums. Because the Gaussian form
    factor couples the azimuths only through ``phi_k - phi_k'``, the double
    trapezoid sum is evaluated exactly as a sum over discrete Fourier modes.
    """
    if not isinstance(target, MesoscopicGaussian):
        raise TypeError("events_mesoscopic needs a MesoscopicGaussian target")
    diag = diag if diag is not None else Diagnostics()
    m = beam.m
    sb2 = target.sigma_b**2
    lo, hi, panels = halfline_window(beam.kappa0, beam.sigma_kappa)
    q2, q_perp, _ = _transfer(beam, direction.theta)
    hint = abs(m) + math.ceil(hi * target.b0) + math.ceil(2.0 * hi * target.sigma_b)
    nphi = max(64, 8 * hint)

    def evaluate(order, nphi):
        k, w = composite_gauss_legendre(lo, hi, panels, order)
        t = 2.0 * np.pi * np.arange(nphi) / nphi
        qk2 = np.maximum(q2 + k[:, None] ** 2 - 2.0 * k[:, None] * q_perp * np.cos(t - direction.phi), 0.0)
        amp = born_amplitude(pot, qk2)
        phase = np.exp(1j * (m * t + k[:, None] * target.b0 * np.cos(t - target.phi_b0)))
        a = (np.sqrt(k) * weight(beam, k) * w)[:, None] * amp * phase
        ahat = np.fft.fft(a, axis=1) / nphi
        cosm1 = np.cos(t) - 1.0
        total = 0.0 + 0.0j
        for i in range(k.size):
            coupling = np.exp(sb2 * k[i] * k[:, None] * cosm1[None, :])
            chat = np.fft.fft(coupling, axis=1).real / nphi
            env = np.exp(-0.5 * sb2 * (k[i] - k) ** 2)
            total += np.sum(env[:, None] * chat * ahat[i][None, :] * np.conj(ahat))
        diag.nodes += k.size * k.size * nphi
        return total

    def finish(total, converged):
        diag.converged = diag.converged and converged
        scale = beam.n_electrons / math.cos(beam.theta_k) / (2.0 * math.pi)
        if abs(total.imag) > 1e-10 * max(abs(total.real), 1e-300):
            diag.flag(f"imaginary residue {abs(total.imag) / abs(total.real):.2e}")
        return scale * total.real

    def feasible(order, n):
        return (panels * order) ** 2 * n <= MESOSCOPIC_EVALUATION_CAP

    order = 8
    estimate = evaluate(order, nphi)
    converged = False
    while feasible(order, 2 * nphi):
        nphi *= 2
        fine = evaluate(order, nphi)
        ok, _ = budget.agree(fine, estimate)
        estimate = fine
        if ok:
            converged = True
            break
    if converged:
        converged = False
        # ratio-1.5 steps so a near-converged order is not skipped past the cap
        for nxt in (12, 16, 24, 32, 48, 64):
            if not feasible(nxt, nphi):
                break
            order = nxt
            fine = evaluate(order, nphi)
            ok, _ = budget.agree(fine, estimate)
            estimate = fine
            if ok:
                converged = True
                break
    if not converged:
        warnings.warn("mesoscopic quadrature reached the evaluation cap; returning partial result",
                      Infeasible, stacklevel=2)
    return finish(estimate, converged)


def ratio_r(beam, target, budget=DEFAULT_BUDGET, diag=None):
    """Small-target ratio ``R(b0) = dsigma_mesos / dsigma_PW``:

    ``int_0^inf J_m^2(kappa0 b) I_0(b b0 / sigma_b^2) exp(-(b^2 + b0^2) / 2 sigma_b^2) b db / sigma_b^2``

    evaluated as ``i0e(x) exp(-(b - b0)^2 / 2 sigma_b^2)`` to avoid overflow.
    """
    if not isinstance(target, MesoscopicGaussian):
        raise TypeError("ratio_r needs a MesoscopicGaussian target")
    sb = target.sigma_b
    if sb * beam.sigma_kappa > 1.0 / MUCH_LESS:
        _warn_regime(f"small-target formula used with sigma_b * sigma_kappa = {sb * beam.sigma_kappa:.3g}")
    b0 = target.b0
    m = beam.m

    def integrand(b):
        return (bessel_j(m, beam.kappa0 * b) ** 2 * bessel_i0e(b * b0 / sb**2)
                * np.exp(-((b - b0) ** 2) / (2.0 * sb**2)) * b / sb**2)

    # b^(2|m|+1) growth of the integrand near the origin shifts its maximum outwards
    peak = 0.5 * (b0 + math.sqrt(b0 * b0 + 4.0 * (2 * abs(m) + 1) * sb * sb))
    return integrate_halfline(integrand, peak, sb, budget, diag).value


def events_small_target(beam, pot, target, direction, budget=DEFAULT_BUDGET, diag=None):
    """Small-target events ``L R(b0) dsigma_PW/dOmega``."""
    return (luminosity(beam, budget, diag) * ratio_r(beam, target, budget, diag)
            * float(plane_wave_dcs_at_transfer(beam, pot, direction.theta)))


def events_large_target(beam, pot, target, direction, budget=DEFAULT_BUDGET, diag=None):
    """Large-target events: each plane-wave component hits the cloud at
    ``b_k = (m / k)(sin phi_k, -cos phi_k)``.

    ``(N_e / cos theta_k) int dk g^2(k) <f^2(Q - k) n(b_k)>_{phi_k}`` with ``n``
    the normalised Gaussian centred at ``b0``. Only the shape in ``b0`` is
    meaningful.
    """
    if not isinstance(target, MesoscopicGaussian):
        raise TypeError("events_large_target needs a MesoscopicGaussian target")
    sb2 = target.sigma_b**2
    if target.sigma_b * beam.sigma_kappa < MUCH_LESS:
        _warn_regime(f"large-target formula used with sigma_b * sigma_kappa = "
                     f"{target.sigma_b * beam.sigma_kappa:.3g}")
    q2, q_perp, _ = _transfer(beam, direction.theta)
    m = beam.m
    b0 = target.b0

    def integrand(k):
        kc = k.reshape(-1, 1)
        r = m / kc
        kappa = float(np.max(np.abs(r))) * b0 / sb2
        hint = int(math.ceil(2.0 * math.sqrt(kappa))) + int(math.ceil(float(np.max(k)) * q_perp))

        def azimuthal(t):
            qk2 = np.maximum(q2 + kc**2 - 2.0 * kc * q_perp * np.cos(t - direction.phi), 0.0)
            d2 = r**2 + b0**2 - 2.0 * r * b0 * np.sin(t - target.phi_b0)
            return born_amplitude(pot, qk2) ** 2 * np.exp(-d2 / (2.0 * sb2))

        mean = integrate_periodic(azimuthal, hint, budget, diag).value
        return weight(beam, k) ** 2 * np.asarray(mean).reshape(k.shape) / (2.0 * math.pi * sb2)

    val = integrate_halfline(integrand, beam.kappa0, beam.sigma_kappa, budget, diag).value
    return beam.n_electrons / math.cos(beam.theta_k) * val
