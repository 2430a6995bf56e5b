"""Cross-module oracle battery run by ``vortex-born selfcheck``.

Each check compares two independent routes to one quantity. Failures are
reported, never raised.
"""

from __future__ import annotations

import math

import numpy as np

from . import scattering as sc
from .beams import BeamSpec, SuperpositionSpec, density, luminosity
from .potentials import Hydrogen1s, Yukawa, plane_wave_total, plane_wave_total_analytic
from .special import KernelArgs, kernel_im

HYDROGEN = Hydrogen1s()
YUKAWA = Yukawa(V0=1.0, mu=1.0)


def _rel(a, b):
    return abs(a - b) / abs(b)


def _wide(theta_k_deg, m=0):
    return BeamSpec.from_opening_angle(math.radians(theta_k_deg), 10.0, sigma_ratio=0.02, m=m)


def check_kernel():
    worst = 0.0
    for power in (1, 2):
        for m in (0, 1, 3):
            for alpha, beta in ((2.0, 1.0), (5.0, 4.9)):
                args = KernelArgs(power, m, alpha, beta)
                worst = max(worst, abs(kernel_im(args) / kernel_im(args, method="quadrature") - 1))
            args = KernelArgs(power, m, 3.0, 0.0, kb=2.5, chi=0.7)
            worst = max(worst, abs(kernel_im(args) / kernel_im(args, method="quadrature") - 1))
    return worst <= 1e-8, f"max rel diff {worst:.2e}"


def _closed_vs_wide(pot):
    worst = 0.0
    theta = np.radians(np.linspace(1.0, 90.0, 10))
    for tk in (10, 20, 30):
        beam = _wide(tk)
        closed = sc.dcs_macroscopic_array(beam, pot, theta, "closed")
        quad = sc.dcs_macroscopic_array(beam, pot, theta, "wide")
        worst = max(worst, float(np.max(np.abs(closed / quad - 1))))
    return worst <= 1e-8, f"max rel diff {worst:.2e}"


def check_yukawa_closed():
    return _closed_vs_wide(YUKAWA)


def check_hydrogen_closed():
    return _closed_vs_wide(HYDROGEN)


def check_luminosity():
    beam = BeamSpec.from_opening_angle(math.radians(10), 10.0, sigma_ratio=0.2, n_electrons=3.0)
    lum = luminosity(beam)
    via_density = beam.n_electrons * density(beam.with_m(0), 0.0) / math.cos(beam.theta_k)
    err = _rel(lum, via_density)
    return err <= 1e-10, f"rel diff {err:.2e}"


def check_plane_wave_total():
    err = max(_rel(plane_wave_total(pot, 10.0), plane_wave_total_analytic(pot, 10.0)) for pot in (HYDROGEN, YUKAWA))
    return err <= 1e-8, f"rel diff {err:.2e}"


def check_total_identity():
    worst = 0.0
    for tk in (15, 30):
        beam = _wide(tk)
        total = sc.total_macroscopic(beam, HYDROGEN)
        worst = max(worst, _rel(total * math.cos(beam.theta_k), plane_wave_total_analytic(HYDROGEN, beam.p_f)))
    return worst <= 1e-3, f"rel diff {worst:.2e}"


def check_superposition_total():
    beam = _wide(20)
    c = 1.0 / math.sqrt(2.0)
    sup = SuperpositionSpec(beam, -1, 1, c, c, alpha2=0.4)
    total = sc.total_superposition(sup, HYDROGEN)
    err = _rel(total * math.cos(beam.theta_k), plane_wave_total_analytic(HYDROGEN, beam.p_f))
    return err <= 1e-3, f"rel diff {err:.2e}"


def _slope(x, y):
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def check_forward_dip():
    beam = BeamSpec.from_opening_angle(math.radians(10), 10.0, sigma_ratio=0.2)
    theta = np.radians(np.linspace(0.1, 1.0, 6))
    worst = 0.0
    for m in (1, 2):
        ev = [sc.events_single(beam.with_m(m), HYDROGEN, sc.SinglePotential(0.0), sc.Direction(t)) for t in theta]
        worst = max(worst, abs(_slope(np.sin(theta), ev) / (2 * m) - 1))
    return worst <= 0.03, f"max slope deviation {worst:.2%}"


def check_small_b():
    beam = BeamSpec.from_opening_angle(math.radians(10), 10.0, sigma_ratio=0.2)
    bs = np.geomspace(1e-3, 1e-2, 5)
    worst = 0.0
    for m in (1, 2):
        ev = [sc.events_single(beam.with_m(m), HYDROGEN, sc.SinglePotential(b), sc.Direction(0.0)) for b in bs]
        worst = max(worst, abs(_slope(bs, ev) / (2 * m) - 1))
    return worst <= 0.03, f"max slope deviation {worst:.2%}"


def check_mirror():
    beam = BeamSpec.from_opening_angle(math.radians(10), 10.0, sigma_ratio=0.2)
    worst = 0.0
    for m in (1, 2):
        a = sc.events_single(beam.with_m(m), HYDROGEN, sc.SinglePotential(2.0, 0.3), sc.Direction(0.3, 1.1))
        b = sc.events_single(beam.with_m(-m), HYDROGEN, sc.SinglePotential(2.0, -0.3), sc.Direction(0.3, -1.1))
        worst = max(worst, _rel(a, b))
    return worst <= 1e-8, f"rel diff {worst:.2e}"


CHECKS = (
    ("kernel closed forms vs quadrature", check_kernel),
    ("Yukawa macroscopic closed form vs quadrature", check_yukawa_closed),
    ("hydrogen macroscopic closed form vs quadrature", check_hydrogen_closed),
    ("luminosity equals axial density / cos(theta_k)", check_luminosity),
    ("plane-wave total, quadrature vs analytic", check_plane_wave_total),
    ("wide-packet total times cos(theta_k) equals plane-wave total", check_total_identity),
    ("superposition interference integrates out", check_superposition_total),
    ("forward-dip power law", check_forward_dip),
    ("small-b power law", check_small_b),
    ("mirror symmetry m -> -m", check_mirror),
)


def run(stream=None):
    """Run every check, print one line each; return ``(all_ok, results)``."""
    results = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # report, never raise
            ok, detail = False, f"error: {exc!r}"
        results.append((name, ok, detail))
        if stream is not None:
            print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}", file=stream)
    return all(ok for _, ok, _ in results), results
