"""Twisted (Bessel) electron wave-packets.

A packet is a superposition of Bessel states with transverse momenta
weighted by a Gaussian ``g(kappa) = C exp(-(kappa - kappa0)^2 / (2 sigma^2))``
on ``kappa >= 0``, normalised so that ``int_0^inf g^2 dkappa = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np
from scipy.special import erf

from .errors import DomainError
from .quadrature import DEFAULT_BUDGET, integrate_halfline
from .special import bessel_j

#: Factor that turns "<<" into a numeric test in :func:`check_validity`.
MUCH_LESS = 10.0


@dataclass(frozen=True)
class BeamSpec:
    kappa0: float
    sigma_kappa: float
    p_i: float
    m: int = 0
    n_electrons: float = 1.0
    sigma_z: float = 1e3
    a_field: float = 1.0

    def __post_init__(self):
        if not self.kappa0 >= 0:
            raise DomainError("kappa0 must be non-negative")
        if not self.sigma_kappa > 0:
            raise DomainError("sigma_kappa must be positive")
        if not self.p_i > 0:
            raise DomainError("p_i must be positive")
        if not self.n_electrons > 0:
            raise DomainError("n_electrons must be positive")
        if int(self.m) != self.m:
            raise DomainError("m must be an integer")

    @classmethod
    def from_opening_angle(cls, theta_k, p_i, sigma_kappa=None, sigma_ratio=None, **kw):
        """Build a packet from its cone opening angle ``tan(theta_k) = kappa0 / p_i``.

        Give either an absolute ``sigma_kappa`` or ``sigma_ratio = sigma_kappa / kappa0``.
        """
        if not 0 <= theta_k < math.pi / 2:
            raise DomainError("theta_k must lie in [0, pi/2)")
        kappa0 = p_i * math.tan(theta_k)
        if (sigma_kappa is None) == (sigma_ratio is None):
            raise ValueError("give exactly one of sigma_kappa, sigma_ratio")
        if sigma_kappa is None:
            sigma_kappa = sigma_ratio * kappa0
        return cls(kappa0=kappa0, sigma_kappa=sigma_kappa, p_i=p_i, **kw)

    @property
    def theta_k(self):
        return math.atan2(self.kappa0, self.p_i)

    @property
    def p_f(self):
        """Modulus of the final momentum, fixed at ``|p_i + kappa0|`` (elastic)."""
        return math.hypot(self.p_i, self.kappa0)

    @cached_property
    def norm(self):
        """Amplitude constant C of the Gaussian weight (closed form via erf)."""
        s = self.sigma_kappa
        mass = 0.5 * math.sqrt(math.pi) * s * (1.0 + erf(self.kappa0 / s))
        return 1.0 / math.sqrt(mass)

    def with_m(self, m):
        return replace(self, m=int(m))


@dataclass(frozen=True)
class SuperpositionSpec:
    """Coherent sum ``c1 |m1> + c2 |m2>`` of two packets with common kinematics."""

    base: BeamSpec
    m1: int
    m2: int
    c1_abs: float
    c2_abs: float
    alpha1: float = 0.0
    alpha2: float = 0.0

    def __post_init__(self):
        if self.c1_abs < 0 or self.c2_abs < 0:
            raise DomainError("coefficient moduli must be non-negative")
        if abs(self.c1_abs**2 + self.c2_abs**2 - 1.0) > 1e-12:
            raise DomainError("|c1|^2 + |c2|^2 must equal 1")

    @property
    def delta_m(self):
        return self.m2 - self.m1

    @property
    def delta_alpha(self):
        return self.alpha2 - self.alpha1


def weight(beam, kappa):
    """Gaussian transverse-momentum amplitude ``g(kappa)``."""
    kappa = np.asarray(kappa, dtype=float)
    if np.any(kappa < 0):
        raise DomainError("kappa must be non-negative")
    val = beam.norm * np.exp(-((kappa - beam.kappa0) ** 2) / (2.0 * beam.sigma_kappa**2))
    return val[()] if val.ndim == 0 else val


def _transverse_integral(beam, integrand, budget, diag):
    return integrate_halfline(integrand, beam.kappa0, beam.sigma_kappa, budget, diag).value


def radial_profile(beam, r_perp, budget=DEFAULT_BUDGET, diag=None):
    """``R^(m)(r) = int_0^inf sqrt(kappa) J_m(kappa r) g(kappa) dkappa``."""
    if r_perp < 0:
        raise DomainError("r_perp must be non-negative")
    if beam.m != 0 and r_perp == 0:
        return 0.0
    return _transverse_integral(
        beam, lambda k: np.sqrt(k) * bessel_j(beam.m, k * r_perp) * weight(beam, k), budget, diag)


def density(beam, r_perp, budget=DEFAULT_BUDGET, diag=None):
    """Transverse probability density ``rho^(m)(r) = R^(m)(r)^2 / (2 pi)``."""
    return radial_profile(beam, r_perp, budget, diag) ** 2 / (2.0 * math.pi)


def luminosity(beam, budget=DEFAULT_BUDGET, diag=None):
    """``L = (N_e / cos theta_k) |int_0^inf g(k) sqrt(k / 2pi) dk|^2``."""
    amp = _transverse_integral(beam, lambda k: weight(beam, k) * np.sqrt(k / (2.0 * math.pi)), budget, diag)
    return beam.n_electrons / math.cos(beam.theta_k) * amp**2


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of the two inequalities ``a << sigma_z << p_i / (kappa0 sigma_kappa)``."""

    field_vs_length: str
    length_vs_spreading: str
    ratio_1: float
    ratio_2: float

    @property
    def ok(self):
        return self.field_vs_length == "pass" and self.length_vs_spreading == "pass"


def check_validity(beam):
    """Check the packet is long compared with the potential and short compared
    with the transverse spreading length. Never raises."""
    ratio_1 = beam.sigma_z / beam.a_field
    if beam.kappa0 == 0:
        ratio_2 = math.inf
    else:
        ratio_2 = beam.p_i / (beam.kappa0 * beam.sigma_kappa) / beam.sigma_z
    return ValidityReport(
        "pass" if ratio_1 >= MUCH_LESS else "warn",
        "pass" if ratio_2 >= MUCH_LESS else "warn",
        ratio_1,
        ratio_2,
    )
