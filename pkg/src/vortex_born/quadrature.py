"""Deterministic 1D quadrature primitives.

Three rules cover every integral in the package:

* :func:`integrate_periodic` -- mean value over one period with the equally
  spaced trapezoid rule, which converges spectrally for smooth periodic
  integrands (all azimuthal integrals).
* :func:`integrate_halfline` -- Gaussian-localised integrals over ``[0, inf)``
  truncated to ``center +- 6 width`` and evaluated with composite
  Gauss-Legendre panels (all transverse-momentum integrals).
* :func:`integrate_sphere` -- solid-angle integrals, Gauss-Legendre in
  ``cos(theta)`` times trapezoid in ``phi``.

Integrands are vectorised: they receive a 1D array of nodes (or broadcastable
``theta``/``phi`` arrays) and return values whose *last* axis runs over the
nodes. Leading axes are treated as independent components, so a batch of
integrals sharing one node set is computed in a single call.

Convergence is judged by agreement of two successive refinements,
``|I_fine - I_coarse| <= max(rel_tol * |I_fine|, abs_tol)`` component-wise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, NotConverged

#: Half-width of the truncated Gaussian window, in units of ``width``.
#: The discarded tail of exp(-x^2/2) beyond 6 is below exp(-18) ~ 1.5e-8
#: of the peak and ~1e-9 of the full integral.
HALFLINE_CUTOFF = 6.0


@dataclass(frozen=True)
class QuadratureBudget:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_nodes: int = 2**20

    def __post_init__(self):
        if not self.rel_tol > 0 or not self.abs_tol > 0:
            raise DomainError("tolerances must be positive")
        if self.max_nodes < 16:
            raise DomainError("max_nodes must be at least 16")

    def agree(self, fine, coarse):
        """Return (converged, est_error) for two successive estimates."""
        diff = np.abs(np.asarray(fine) - np.asarray(coarse))
        bound = np.maximum(self.rel_tol * np.abs(fine), self.abs_tol)
        return bool(np.all(diff <= bound)), float(np.max(diff, initial=0.0))


DEFAULT_BUDGET = QuadratureBudget()
#: Budget used for production tables (figure-level fidelity).
TABLE_BUDGET = QuadratureBudget(rel_tol=1e-6)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex | float | np.ndarray
    est_error: float
    nodes_used: int
    converged: bool


@dataclass
class Diagnostics:
    """Per-evaluation record of quadrature effort, filled in by callers."""

    nodes: int = 0
    converged: bool = True
    flags: list = field(default_factory=list)

    def record(self, result):
        self.nodes += result.nodes_used
        self.converged = self.converged and result.converged
        return result

    def flag(self, text):
        if text not in self.flags:
            self.flags.append(text)


def _record(diag, result):
    if diag is not None:
        diag.record(result)
    return result


def _squeeze(value):
    value = np.asarray(value)
    if value.ndim == 0:
        value = value[()]
        return complex(value) if np.iscomplexobj(value) else float(value)
    return value


def integrate_periodic(f, oscillation_hint=0, budget=DEFAULT_BUDGET, diag=None):
    """Mean value ``(1/2pi) int_0^2pi f(psi) dpsi`` by the trapezoid rule.

    Starts from ``max(64, 8 * oscillation_hint)`` equally spaced nodes and
    doubles (re-using the previous nodes) until two successive estimates
    agree. ``f`` takes an array of angles and returns values with the nodes
    on the last axis.
    """
    if oscillation_hint < 0:
        raise DomainError("oscillation_hint must be non-negative")
    n = max(64, 8 * int(math.ceil(oscillation_hint)))
    if n > budget.max_nodes:
        n = budget.max_nodes
    psi = 2.0 * np.pi * np.arange(n) / n
    total = np.sum(f(psi), axis=-1)
    estimate = total / n
    used = n
    est_error = math.inf
    while True:
        if 2 * n > budget.max_nodes:
            warnings.warn(
                f"periodic quadrature stopped at {n} nodes (error {est_error:.3g})",
                NotConverged, stacklevel=2)
            return _record(diag, QuadratureResult(_squeeze(estimate), est_error, used, False))
        mid = 2.0 * np.pi * (np.arange(n) + 0.5) / n
        total = total + np.sum(f(mid), axis=-1)
        used += n
        n *= 2
        fine = total / n
        ok, est_error = budget.agree(fine, estimate)
        estimate = fine
        if ok:
            return _record(diag, QuadratureResult(_squeeze(fine), est_error, used, True))


@lru_cache(maxsize=32)
def _gauss_legendre(order):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_gauss_legendre(lo, hi, panels, order):
    """Nodes and weights of ``panels`` equal Gauss-Legendre panels on [lo, hi]."""
    x, w = _gauss_legendre(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def halfline_window(center, width):
    """Integration window ``[max(0, c - 6w), c + 6w]`` and its panel count."""
    lo = max(0.0, center - HALFLINE_CUTOFF * width)
    hi = center + HALFLINE_CUTOFF * width
    panels = max(1, int(math.ceil((hi - lo) / width - 1e-9)))
    return lo, hi, panels


def integrate_halfline(f, center, width, budget=DEFAULT_BUDGET, diag=None, start_order=8):
    """Integrate a Gaussian-localised ``f`` over ``[0, inf)``.

    The integrand must decay like ``exp(-(k - center)^2 / (2 width^2))`` (or
    faster); it is integrated over ``[max(0, center - 6 width),
    center + 6 width]`` split into panels of at most ``width``, with the
    Gauss-Legendre order per panel doubled from ``start_order`` until
    successive results agree.
    """
    if not width > 0:
        raise DomainError(f"width must be positive, got {width}")
    if center < 0:
        raise DomainError(f"center must be non-negative, got {center}")
    lo, hi, panels = halfline_window(center, width)
    order = start_order
    nodes, weights = composite_gauss_legendre(lo, hi, panels, order)
    estimate = np.sum(f(nodes) * weights, axis=-1)
    used = nodes.size
    est_error = math.inf
    while True:
        order *= 2
        if panels * order > budget.max_nodes:
            warnings.warn(
                f"half-line quadrature stopped at order {order // 2} (error {est_error:.3g})",
                NotConverged, stacklevel=2)
            return _record(diag, QuadratureResult(_squeeze(estimate), est_error, used, False))
        nodes, weights = composite_gauss_legendre(lo, hi, panels, order)
        fine = np.sum(f(nodes) * weights, axis=-1)
        used += nodes.size
        ok, est_error = budget.agree(fine, estimate)
        estimate = fine
        if ok:
            return _record(diag, QuadratureResult(_squeeze(fine), est_error, used, True))


def _sphere_sum(f, panels, order, nphi):
    c, w = composite_gauss_legendre(-1.0, 1.0, panels, order)
    theta = np.arccos(np.clip(c, -1.0, 1.0))[:, None]
    phi = (2.0 * np.pi * np.arange(nphi) / nphi)[None, :]
    vals = np.broadcast_to(f(theta, phi), (c.size, nphi))
    # trapezoid in phi: (2 pi / nphi) * sum
    return float(np.sum(w[:, None] * vals) * (2.0 * np.pi / nphi)), c.size * nphi


def integrate_sphere(f, budget=DEFAULT_BUDGET, diag=None, order=16):
    """Solid-angle integral ``int f(theta, phi) sin(theta) dtheta dphi``.

    ``f`` is called with a column of polar angles and a row of azimuths and
    must broadcast. The azimuthal node count is refined first at a coarse
    polar rule, then the number of ``cos(theta)`` panels is doubled until
    successive results agree.
    """
    panels, nphi = 8, 16
    used = 0
    estimate, n = _sphere_sum(f, panels, order, nphi)
    used += n
    converged = False
    est_error = math.inf
    while panels * order * 2 * nphi <= budget.max_nodes:
        nphi *= 2
        fine, n = _sphere_sum(f, panels, order, nphi)
        used += n
        ok, est_error = budget.agree(fine, estimate)
        estimate = fine
        if ok:
            converged = True
            break
    if converged:
        converged = False
        while 2 * panels * order * nphi <= budget.max_nodes:
            panels *= 2
            fine, n = _sphere_sum(f, panels, order, nphi)
            used += n
            ok, est_error = budget.agree(fine, estimate)
            estimate = fine
            if ok:
                converged = True
                break
    if not converged:
        warnings.warn(f"sphere quadrature did not converge (error {est_error:.3g})",
                      NotConverged, stacklevel=2)
    return _record(diag, QuadratureResult(estimate, est_error, used, converged))
