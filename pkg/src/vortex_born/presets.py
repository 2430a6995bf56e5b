"""Ready-made scenarios, one configuration per curve of each published figure.

All presets use hydrogen targets. Figures 3, 4 and 6 have unnormalised
ordinates; their tables carry raw per-electron values (or the ratio the
figure plots) and only shapes are comparable.
"""

from __future__ import annotations

import math

from .config import from_dict


class UnknownPreset(KeyError):
    """Requested preset name does not exist."""


#: Width used for the "sigma_kappa << kappa0" curves.
WIDE_RATIO = 0.02

_P_I = "10 /a0"
_H = {"kind": "hydrogen"}


def _fig1():
    out = []
    for tk in (15, 30):
        grid = {"theta_min": 0.0, "theta_max": 60.0, "theta_steps": 121}
        common = {"observable": "dcs", "potential": dict(_H), "target": {"kind": "macroscopic"}, "grid": grid}
        out.append({"name": f"fig1-thetak{tk}-wide", "method": "closed",
                    "beam": {"p_i": _P_I, "theta_k": f"{tk} deg", "sigma_ratio": WIDE_RATIO}, **common})
        out.append({"name": f"fig1-thetak{tk}-sigma3", "method": "general",
                    "beam": {"p_i": _P_I, "theta_k": f"{tk} deg", "sigma_ratio": 1.0 / 3.0}, **common})
        # plane-wave baseline: a zero-opening-angle beam
        out.append({"name": f"fig1-thetak{tk}-planewave", "method": "closed",
                    "beam": {"p_i": _P_I, "theta_k": "0 deg", "sigma_kappa": "1e-6 /a0"}, **common})
    return out


def _fig2():
    c = 1.0 / math.sqrt(2.0)
    return [{
        "name": f"fig2-thetak{tk}", "observable": "asymmetry", "method": "wide",
        "beam": {"p_i": _P_I, "theta_k": f"{tk} deg", "sigma_ratio": WIDE_RATIO},
        "potential": dict(_H), "target": {"kind": "macroscopic"},
        "superposition": {"m1": -1, "m2": 1, "c1": c, "c2": c},
        "grid": {"theta_min": 0.0, "theta_max": 60.0, "theta_steps": 601},
    } for tk in (10, 20, 30)]


def _fig3():
    return [{
        "name": f"fig3-b{b}-m{m}", "observable": "events",
        "beam": {"p_i": _P_I, "theta_k": "10 deg", "sigma_ratio": 0.2, "m": m},
        "potential": dict(_H), "target": {"kind": "single", "b": f"{b} a0"},
        "grid": {"theta_min": 0.0, "theta_max": 40.0, "theta_steps": 81},
    } for b in (0, 1) for m in (0, 1, 2)]


def _fig4():
    return [{
        "name": f"fig4-theta{th}-m{m}", "observable": "events", "normalize": "phi0",
        "beam": {"p_i": _P_I, "theta_k": "10 deg", "sigma_ratio": 0.2, "m": m},
        "potential": dict(_H), "target": {"kind": "single", "b": "2 a0"},
        "grid": {"theta_min": float(th), "phi_min": 0.0, "phi_max": 360.0, "phi_steps": 73},
    } for th in (1, 20) for m in (-2, -1, 0, 1, 2)]


def _fig5():
    beam = {"p_i": _P_I, "kappa0": "0.1 /nm", "sigma_kappa": "0.02 /nm"}
    out = [{
        "name": f"fig5-ratio-m{m}", "observable": "ratio_r",
        "beam": {**beam, "m": m}, "potential": dict(_H),
        "target": {"kind": "mesoscopic", "sigma_b": "10 nm", "limit": "small"},
        "grid": {"b_min": "0 nm", "b_max": "60 nm", "b_steps": 121},
    } for m in (0, 1, 3, 5)]
    out += [{
        "name": f"fig5-density-m{m}", "observable": "density", "normalize": "rho0",
        "beam": {**beam, "m": m}, "potential": dict(_H), "target": {"kind": "single"},
        "grid": {"b_min": "0 nm", "b_max": "60 nm", "b_steps": 121},
    } for m in (0, 1, 3, 5)]
    return out


def _fig6():
    return [{
        "name": f"fig6-m{m}", "observable": "events",
        "beam": {"p_i": _P_I, "theta_k": "1 deg", "sigma_kappa": "0.5 /nm", "m": m},
        "potential": dict(_H),
        "target": {"kind": "mesoscopic", "sigma_b": "10 nm", "phi_b0": 0.0, "limit": "large"},
        "grid": {"theta_min": 1.0, "phi_min": 0.0, "b_min": "0 nm", "b_max": "60 nm", "b_steps": 121},
    } for m in (0, 50, 100)]


_PRESETS = {"fig1": _fig1, "fig2": _fig2, "fig3": _fig3, "fig4": _fig4, "fig5": _fig5, "fig6": _fig6}
NAMES = tuple(_PRESETS)


def preset_raw(name):
    if name not in _PRESETS:
        raise UnknownPreset(f"unknown preset {name!r} (choose from {', '.join(NAMES)})")
    return _PRESETS[name]()


def preset(name):
    """Return the list of :class:`~vortex_born.config.ScenarioConfig` for a figure."""
    return [from_dict(raw) for raw in preset_raw(name)]
