"""Interaction models and their first-Born plane-wave amplitudes.

Both supported potentials have Born amplitudes that are sums of inverse
powers of one linear function of the momentum transfer squared,

    f(q^2) = sum_n c_n / (lam0 + lam1 q^2)^n ,

which is what lets the twisted amplitude be written through the azimuthal
kernel of :mod:`vortex_born.special`. :meth:`rational_form` exposes
``(lam0, lam1, ((n, c_n), ...))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quadrature import DEFAULT_BUDGET, integrate_sphere
from .units import ELECTRON_MASS


@dataclass(frozen=True)
class Yukawa:
    """``U(r) = V0 exp(-mu r) / r``; V0 > 0 is repulsive."""

    V0: float
    mu: float

    def __post_init__(self):
        if not self.mu > 0:
            raise DomainError("Yukawa screening mu must be positive")

    @property
    def radius(self):
        return 1.0 / self.mu

    def rational_form(self):
        return self.mu**2, 1.0, ((1, -2.0 * ELECTRON_MASS * self.V0),)


@dataclass(frozen=True)
class Hydrogen1s:
    """Static potential of a ground-state hydrogen atom (nucleus + 1s cloud)."""

    a0: float = 1.0

    def __post_init__(self):
        if not self.a0 > 0:
            raise DomainError("Bohr radius must be positive")

    @property
    def radius(self):
        return self.a0 / 2.0

    def rational_form(self):
        half = self.a0 / 2.0
        return 1.0, self.a0**2 / 4.0, ((1, half), (2, half))


def born_amplitude(pot, q2):
    """First-Born plane-wave amplitude f(q^2), real-valued (length units)."""
    q2 = np.asarray(q2, dtype=float)
    if np.any(q2 < 0):
        raise DomainError("q^2 must be non-negative")
    lam0, lam1, terms = pot.rational_form()
    w = lam0 + lam1 * q2
    val = sum(c / w**n for n, c in terms)
    return val[()] if np.ndim(val) == 0 else val


def plane_wave_dcs(pot, p, theta):
    """Elastic plane-wave cross section |f(q)|^2 with q = 2 p sin(theta/2)."""
    if not p > 0:
        raise DomainError("momentum must be positive")
    theta = np.asarray(theta, dtype=float)
    if np.any(theta < 0) or np.any(theta > np.pi + 1e-12):
        raise DomainError("theta must lie in [0, pi]")
    q2 = 4.0 * p * p * np.sin(0.5 * theta) ** 2
    return born_amplitude(pot, q2) ** 2


def plane_wave_total_analytic(pot, p):
    """Closed-form total Born cross section.

    Yukawa: ``16 pi m^2 V0^2 / (mu^2 (mu^2 + 4 p^2))``. Hydrogen:
    ``(pi/p^2) [2 - 1/(1+X) - 1/(1+X)^2 + (1 - 1/(1+X)^3)/3]`` with
    ``X = p^2 a0^2``, which tends to ``7 pi / (3 p^2)`` at large p.
    """
    if not p > 0:
        raise DomainError("momentum must be positive")
    if isinstance(pot, Yukawa):
        mu2 = pot.mu**2
        return 16.0 * math.pi * (ELECTRON_MASS * pot.V0) ** 2 / (mu2 * (mu2 + 4.0 * p * p))
    if isinstance(pot, Hydrogen1s):
        y = 1.0 / (1.0 + (p * pot.a0) ** 2)
        return math.pi / p**2 * (2.0 - y - y * y + (1.0 - y**3) / 3.0)
    raise TypeError(f"unsupported potential {pot!r}")


def plane_wave_total(pot, p, budget=DEFAULT_BUDGET, diag=None):
    """Total cross section by quadrature of :func:`plane_wave_dcs` over the sphere."""
    res = integrate_sphere(lambda th, ph: plane_wave_dcs(pot, p, th), budget, diag)
    return res.value
