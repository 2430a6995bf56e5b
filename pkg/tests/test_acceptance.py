"""Acceptance suite: one PASS/FAIL line per criterion (shown in the terminal summary).

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import io
import math
import subprocess
import sys
import time
import warnings
from pathlib import Path

import numpy as np
import pytest
from scipy import special

from vortex_born import scattering as sc
from vortex_born import selfcheck
from vortex_born.beams import BeamSpec, SuperpositionSpec
from vortex_born.potentials import Hydrogen1s, Yukawa, plane_wave_total, plane_wave_total_analytic
from vortex_born.presets import WIDE_RATIO, preset
from vortex_born.runner import run_scenario

H = Hydrogen1s()
Y = Yukawa(V0=1.0, mu=1.0)
D = sc.Direction
P_I = 10.0


def wide(theta_k_deg, m=0):
    return BeamSpec.from_opening_angle(math.radians(theta_k_deg), P_I, sigma_ratio=WIDE_RATIO, m=m)


def fig3_beam(m=0):
    return BeamSpec.from_opening_angle(math.radians(10), P_I, sigma_ratio=0.2, m=m)


def slope(x, y):
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def tables(name):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return {cfg.name: run_scenario(cfg)[0] for cfg in preset(name)}


def test_c01_total_cross_section_identity(criterion):
    start = time.perf_counter()
    errs = []
    for tk in (15, 30):
        beam = wide(tk)
        total = sc.total_macroscopic(beam, H)
        errs.append(abs(total * math.cos(beam.theta_k) / plane_wave_total(H, beam.p_f) - 1))
    elapsed = time.perf_counter() - start
    ok = max(errs) <= 1e-3 and elapsed < 10
    criterion(1, "total-cross-section identity", ok,
              f"rel err {errs[0]:.2e} (15 deg), {errs[1]:.2e} (30 deg), {elapsed:.2f} s")


def test_c02_closed_form_equivalence(criterion):
    start = time.perf_counter()
    theta = np.radians(np.linspace(1.0, 90.0, 10))
    worst = {}
    for label, pot in (("Yukawa", Y), ("hydrogen", H)):
        worst[label] = 0.0
        for tk in (10, 20, 30):
            beam = wide(tk)
            closed = sc.dcs_macroscopic_array(beam, pot, theta, "closed")
            quad = sc.dcs_macroscopic_array(beam, pot, theta, "wide")
            worst[label] = max(worst[label], float(np.max(np.abs(closed / quad - 1))))
    elapsed = time.perf_counter() - start
    ok = max(worst.values()) <= 1e-8 and elapsed < 5
    criterion(2, "closed forms vs azimuthal quadrature", ok,
              f"max rel diff Yukawa {worst['Yukawa']:.1e}, hydrogen {worst['hydrogen']:.1e}, {elapsed:.2f} s")


def test_c03_forward_dip_law(criterion):
    start = time.perf_counter()
    theta = np.radians(np.linspace(0.1, 1.0, 10))
    slopes = {}
    for m in (1, 2):
        ev = [sc.events_single(fig3_beam(m), H, sc.SinglePotential(0.0), D(t)) for t in theta]
        slopes[m] = slope(np.sin(theta), ev)
    elapsed = time.perf_counter() - start
    ok = all(abs(s / (2 * m) - 1) <= 0.03 for m, s in slopes.items()) and elapsed < 30
    criterion(3, "forward-dip power law", ok,
              f"slopes {slopes[1]:.4f} (m=1), {slopes[2]:.4f} (m=2), {elapsed:.2f} s")


def test_c04_small_b_law(criterion):
    start = time.perf_counter()
    bs = np.geomspace(1e-3, 1e-2, 6)
    slopes = {}
    for m in (1, 2):
        ev = [sc.events_single(fig3_beam(m), H, sc.SinglePotential(b), D(0.0)) for b in bs]
        slopes[m] = slope(bs, ev)
    elapsed = time.perf_counter() - start
    ok = all(abs(s / (2 * m) - 1) <= 0.03 for m, s in slopes.items()) and elapsed < 30
    criterion(4, "small-b power law", ok,
              f"slopes {slopes[1]:.4f} (m=1), {slopes[2]:.4f} (m=2), {elapsed:.2f} s")


def test_c05_fig1_shape(criterion):
    tabs = tables("fig1")
    parts, ok = [], True
    for tk in (15, 30):
        for kind in ("wide", "sigma3"):
            tab = tabs[f"fig1-thetak{tk}-{kind}"]
            at = tab.theta_deg[int(np.argmax(tab.values))]
            ok &= abs(at - tk) <= 0.5
            parts.append(f"{kind}@{tk}: argmax {at:g} deg")
        tab = tabs[f"fig1-thetak{tk}-planewave"]
        at = tab.theta_deg[int(np.argmax(tab.values))]
        ok &= at == 0.0
        parts.append(f"plane wave: argmax {at:g} deg")
    criterion(5, "fig1 peak at theta_k", ok, "; ".join(parts))


def test_c06_fig2_asymmetry(criterion):
    tabs = tables("fig2")
    parts, ok = [], True
    peaks = []
    for tk in (10, 20, 30):
        tab = tabs[f"fig2-thetak{tk}"]
        i = int(np.argmax(tab.values))
        peaks.append(tab.values[i])
        ok &= abs(tab.theta_deg[i] - tk) <= 1.0
        parts.append(f"argmax {tab.theta_deg[i]:g} deg (theta_k {tk})")
    increasing = all(b > a for a, b in zip(peaks, peaks[1:]))
    ok &= increasing
    parts.append(f"peaks {', '.join(f'{p:.4f}' for p in peaks)} {'increasing' if increasing else 'not increasing'}")

    single = SuperpositionSpec(wide(20), -1, 1, 1.0, 0.0)
    a_zero = max(abs(sc.asymmetry_a(single, H, math.radians(t))) for t in (1.0, 10.0, 20.0, 40.0))
    ok &= a_zero == 0.0
    parts.append(f"max |A| with c2=0: {a_zero:g}")

    c = 1.0 / math.sqrt(2.0)
    errs = []
    for tk in (10, 20, 30):
        sup = SuperpositionSpec(wide(tk), -1, 1, c, c, alpha2=0.4)
        beam = sup.base
        total = sc.total_superposition(sup, H)
        errs.append(abs(total * math.cos(beam.theta_k) / plane_wave_total_analytic(H, beam.p_f) - 1))
    ok &= max(errs) <= 1e-3
    parts.append(f"sphere-integrated total rel err <= {max(errs):.1e}")
    criterion(6, "fig2 asymmetry behaviour", ok, "; ".join(parts))


def test_c07_fig3_forward_values(criterion):
    tabs = tables("fig3")
    parts, ok = [], True
    for m in (0, 1, 2):
        tab = tabs[f"fig3-b0-m{m}"]
        assert tab.theta_deg[0] == 0.0
        ratio = tab.values[0] / max(tab.values)
        ok &= ratio < 1e-10 if m else ratio > 0.1
        parts.append(f"b=0 m={m}: {ratio:.3g} x peak")
    for m in (0, 1, 2):
        v = tabs[f"fig3-b1-m{m}"].values[0]
        ok &= v > 0
        parts.append(f"b=a0 m={m}: {v:.3g}")
    criterion(7, "fig3 forward behaviour", ok, "; ".join(parts))


def test_c08_factorisation(criterion):
    theta = math.radians(30)
    q = 2 * P_I * math.sin(theta / 2)
    k0 = q / 50
    beam = BeamSpec(k0, k0 / 50, P_I, m=1)
    pw = float(sc.plane_wave_dcs_at_transfer(beam, H, theta))
    errs = []
    for x in (0.5, 1.0, 2.0, 3.0, 5.0):  # kappa0 b, away from the zeros of J_1
        exact = sc.cross_section_single(beam, H, sc.SinglePotential(x / k0), D(theta))
        errs.append(abs(exact / (pw * special.jv(1, x) ** 2) - 1))
    criterion(8, "factorisation at small kappa0", max(errs) <= 0.01,
              f"max rel diff {max(errs):.2e} over kappa0 b in (0.5, 1, 2, 3, 5)")


def test_c09_mesoscopic_limits(criterion):
    worst = 0.0
    for m, b0, th in ((0, 0.0, 8.0), (1, 0.0, 8.0), (1, 1.0, 3.0), (2, 0.7, 12.0)):
        beam = fig3_beam(m)
        sb = 0.01 / beam.sigma_kappa
        d = D(math.radians(th), 0.2)
        single = sc.events_single(beam, H, sc.SinglePotential(b0, 0.4), d)
        meso = sc.events_mesoscopic(beam, H, sc.MesoscopicGaussian(b0, sb, 0.4), d)
        worst = max(worst, abs(meso / single - 1))
    beam = BeamSpec(kappa0=1e-6, sigma_kappa=1e-7, p_i=P_I)
    r_err = max(abs(sc.ratio_r(beam, sc.MesoscopicGaussian(b0, 1.0)) - 1) for b0 in (0.0, 0.5, 1.0, 3.0, 10.0, 100.0))
    ok = worst <= 0.01 and r_err <= 1e-6
    criterion(9, "mesoscopic limits", ok,
              f"point-cloud vs single max rel diff {worst:.2e}; |R - 1| <= {r_err:.1e}")


def test_c10_fig6_peak_shift(criterion):
    tabs = tables("fig6")
    kappa0 = preset("fig6")[0].beam.kappa0
    peaks = {}
    for m in (0, 50, 100):
        tab = tabs[f"fig6-m{m}"]
        peaks[m] = tab.b_a0[int(np.argmax(tab.values))]
    shifts = peaks[0] < peaks[50] < peaks[100]
    rel = abs(peaks[100] / (100 / kappa0) - 1)
    ok = shifts and rel <= 0.25
    criterion(10, "fig6 peak moves out with m", ok,
              f"argmax b0 = {peaks[0]:.1f}, {peaks[50]:.1f}, {peaks[100]:.1f} a0; "
              f"m=100 vs m/kappa0 = {100 / kappa0:.1f} a0: {rel:.1%}")


def test_c11_property_suite_and_selfcheck(criterion):
    tests_dir = Path(__file__).parent
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(tests_dir),
         "--ignore", str(tests_dir / "test_acceptance.py")],
        capture_output=True, text=True, cwd=tests_dir.parent)
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr.strip()[-200:]
    start = time.perf_counter()
    ok_check, results = selfcheck.run(io.StringIO())
    elapsed = time.perf_counter() - start
    ok = proc.returncode == 0 and ok_check and elapsed < 60
    passed = sum(r[1] for r in results)
    criterion(11, "property suite and selfcheck", ok,
              f"property suite: {summary}; selfcheck {passed}/{len(results)} in {elapsed:.2f} s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
