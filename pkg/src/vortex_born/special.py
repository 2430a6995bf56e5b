"""Special functions: Bessel J_m, I_0 and the azimuthal kernel.

The kernel is

    I_m^(n)(alpha, beta, kb, chi) =
        (1/2pi) int_0^2pi exp(i m psi + i kb cos(psi + chi)) / (alpha - beta cos psi)^n dpsi

with ``n`` in {1, 2}. For ``n = 1`` it is the azimuthal integral that turns a
Yukawa-type Born amplitude into the twisted amplitude; ``n = 2`` equals
``-d/dalpha`` of ``n = 1`` and supplies the second term of the hydrogen
amplitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .errors import DomainError
from .quadrature import DEFAULT_BUDGET, integrate_periodic

MAX_BESSEL_ORDER = 512
I0_OVERFLOW = 700.0


def bessel_j(m, x):
    """Integer-order Bessel function J_m(x), with J_{-m} = (-1)^m J_m."""
    m = int(m)
    if abs(m) > MAX_BESSEL_ORDER:
        raise DomainError(f"|m| must not exceed {MAX_BESSEL_ORDER}")
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("bessel_j argument must be finite")
    val = sc.jv(abs(m), x)
    if m < 0 and m % 2:
        val = -val
    return val[()] if val.ndim == 0 else val


def bessel_i0e(x):
    """Exponentially scaled modified Bessel function exp(-x) I_0(x), x >= 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise DomainError("bessel_i0e requires finite x >= 0")
    val = sc.i0e(x)
    return val[()] if val.ndim == 0 else val


def bessel_i0(x):
    """Modified Bessel function I_0(x) for 0 <= x <= 700.

    Above x = 30 the value is formed as ``i0e(x) * exp(x)``; beyond 700 it
    would overflow a double and :class:`OverflowError` is raised.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise DomainError("bessel_i0 requires finite x >= 0")
    if np.any(x > I0_OVERFLOW):
        raise OverflowError(f"I_0(x) overflows for x > {I0_OVERFLOW}")
    val = np.where(x > 30.0, sc.i0e(x) * np.exp(np.minimum(x, I0_OVERFLOW)), sc.i0(x))
    return val[()] if val.ndim == 0 else val


@dataclass(frozen=True)
class KernelArgs:
    power: int
    m: int
    alpha: float
    beta: float
    kb: float = 0.0
    chi: float = 0.0

    def __post_init__(self):
        if self.power not in (1, 2):
            raise DomainError(f"power must be 1 or 2, got {self.power}")
        if not self.alpha > self.beta:
            raise DomainError(f"kernel requires alpha > beta (alpha={self.alpha}, beta={self.beta})")
        if self.beta < 0:
            raise DomainError("beta must be non-negative")
        if self.kb < 0:
            raise DomainError("kb must be non-negative")


def _root(alpha, beta):
    # sqrt(alpha^2 - beta^2) without cancellation near alpha ~ beta
    return np.sqrt((alpha - beta) * (alpha + beta))


def closed_central(power, m, alpha, beta):
    """Kernel at kb = 0: ``t^|m| / s`` (n=1) or ``t^|m| (|m| s + alpha) / s^3`` (n=2).

    Here ``s = sqrt(alpha^2 - beta^2)`` and ``t = beta / (alpha + s)``.
    Vectorised over ``alpha``/``beta``.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    s = _root(alpha, beta)
    am = abs(int(m))
    t_m = (beta / (alpha + s)) ** am
    if power == 1:
        return t_m / s
    return t_m * (am * s + alpha) / s**3


def closed_forward(power, m, alpha, kb, chi):
    """Kernel at beta = 0 (forward direction): ``i^m J_m(kb) e^{-i m chi} / alpha^n``."""
    alpha = np.asarray(alpha, dtype=float)
    phase = (1j ** (int(m) % 4)) * np.exp(-1j * m * chi)
    return phase * bessel_j(m, kb) / alpha**power


def kernel_im_closed(args):
    """Closed form of the kernel, or ``None`` when none applies.

    Available for ``kb = 0`` (any beta) and for ``beta = 0`` (any kb), for
    both powers.
    """
    if args.kb == 0.0:
        return complex(closed_central(args.power, args.m, args.alpha, args.beta))
    if args.beta == 0.0:
        return complex(closed_forward(args.power, args.m, args.alpha, args.kb, args.chi))
    return None


def kernel_quadrature(power, m, alpha, beta, kb, chi, budget=DEFAULT_BUDGET, diag=None):
    """Kernel by trapezoid quadrature, vectorised over ``alpha``, ``beta``, ``kb``.

    All array arguments broadcast against each other; one node set is shared
    by the whole batch.
    """
    alpha, beta, kb = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (alpha, beta, kb)))
    shape = alpha.shape
    a = alpha.reshape(-1, 1)
    b = beta.reshape(-1, 1)
    x = kb.reshape(-1, 1)
    hint = abs(int(m)) + int(math.ceil(float(np.max(kb, initial=0.0))))

    def integrand(psi):
        return np.exp(1j * (m * psi + x * np.cos(psi + chi))) / (a - b * np.cos(psi)) ** power

    res = integrate_periodic(integrand, hint, budget, diag)
    return np.asarray(res.value).reshape(shape)


def kernel_values(power, m, alpha, beta, kb, chi, budget=DEFAULT_BUDGET, diag=None):
    """Batch kernel with closed-form dispatch where every element allows it."""
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    kb = np.asarray(kb, dtype=float)
    if np.any(alpha <= beta):
        raise DomainError("kernel requires alpha > beta")
    if np.all(kb == 0.0):
        return np.broadcast_to(closed_central(power, m, alpha, beta),
                               np.broadcast_shapes(alpha.shape, beta.shape, kb.shape)).astype(complex)
    if np.all(beta == 0.0):
        return np.broadcast_to(closed_forward(power, m, alpha, kb, chi),
                               np.broadcast_shapes(alpha.shape, beta.shape, kb.shape)).astype(complex)
    return kernel_quadrature(power, m, alpha, beta, kb, chi, budget, diag)


def kernel_im(args, budget=DEFAULT_BUDGET, method="auto", diag=None):
    """Azimuthal kernel for one set of arguments.

    ``method="auto"`` uses a closed form when one exists and falls back to
    quadrature; ``method="quadrature"`` always integrates.
    """
    if method not in ("auto", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        closed = kernel_im_closed(args)
        if closed is not None:
            return closed
    val = kernel_quadrature(args.power, args.m, args.alpha, args.beta, args.kb, args.chi, budget, diag)
    return complex(val)


def azimuthal_power_mean(p, alpha, beta):
    """``(1/2pi) int dpsi (alpha - beta cos psi)^-p`` for integer p >= 1.

    Laplace's integral for Legendre polynomials gives
    ``P_{p-1}(alpha/s) / s^p`` with ``s = sqrt(alpha^2 - beta^2)``.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    s = _root(alpha, beta)
    return sc.eval_legendre(p - 1, alpha / s) / s**p
