"""Hartree atomic units and parsing of unit-suffixed quantities.

Internally everything is in atomic units, hbar = m_e = e = a0 = 1.
Momenta are in 1/a0, lengths in a0, energies in Hartree, angles in radians.
At the interface angles are given in degrees.
"""

from __future__ import annotations

import math
import re

# CODATA 2018
BOHR_RADIUS_NM = 0.0529177210903
HARTREE_EV = 27.211386245988
ELECTRON_MASS = 1.0

NM = 1.0 / BOHR_RADIUS_NM  # one nanometre in a0 (18.8973...)
ANGSTROM = 0.1 * NM
EV = 1.0 / HARTREE_EV
KEV = 1e3 * EV


def nm_to_a0(x):
    return x * NM


def a0_to_nm(x):
    return x / NM


def kinetic_energy(p):
    """Non-relativistic kinetic energy p**2 / 2m in Hartree."""
    return p * p / (2.0 * ELECTRON_MASS)


def momentum_from_energy(energy):
    """Inverse of :func:`kinetic_energy`."""
    if energy < 0:
        raise ValueError("kinetic energy must be non-negative")
    return math.sqrt(2.0 * ELECTRON_MASS * energy)


_LENGTH = {"a0": 1.0, "bohr": 1.0, "au": 1.0, "a.u.": 1.0, "nm": NM, "angstrom": ANGSTROM, "a": ANGSTROM}
_INV_LENGTH = {"/a0": 1.0, "a0^-1": 1.0, "1/a0": 1.0, "/bohr": 1.0, "au": 1.0, "a.u.": 1.0,
               "/nm": 1.0 / NM, "nm^-1": 1.0 / NM, "1/nm": 1.0 / NM,
               "/angstrom": 1.0 / ANGSTROM, "angstrom^-1": 1.0 / ANGSTROM}
_ENERGY = {"ha": 1.0, "hartree": 1.0, "au": 1.0, "a.u.": 1.0, "ev": EV, "kev": KEV}
_ANGLE = {"deg": math.pi / 180.0, "rad": 1.0}

# kind -> (suffix table, scale applied to bare numbers)
_KINDS = {
    "length": (_LENGTH, 1.0),
    "momentum": (_INV_LENGTH, 1.0),
    "energy": (_ENERGY, 1.0),
    "angle": (_ANGLE, math.pi / 180.0),
    "strength": ({"au": 1.0, "a.u.": 1.0}, 1.0),
    "dimensionless": ({}, 1.0),
}

_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(.*?)\s*$")


def parse_quantity(value, kind):
    """Convert ``value`` to internal units.

    ``value`` is a number (already in internal units, or degrees for angles)
    or a string such as ``"10 /a0"``, ``"2 nm"``, ``"1.4 keV"``, ``"15 deg"``.

    >>> round(parse_quantity("1 nm", "length"), 4)
    18.8973
    """
    if kind not in _KINDS:
        raise ValueError(f"unknown quantity kind {kind!r}")
    table, bare_scale = _KINDS[kind]
    if isinstance(value, bool):
        raise ValueError(f"expected a {kind}, got a boolean")
    if isinstance(value, (int, float)):
        return float(value) * bare_scale
    if not isinstance(value, str):
        raise ValueError(f"expected a {kind}, got {type(value).__name__}")
    match = _NUMBER.match(value)
    if match is None:
        raise ValueError(f"cannot parse {kind} from {value!r}")
    number, suffix = float(match.group(1)), match.group(2).replace(" ", "")
    if not suffix:
        return number * bare_scale
    key = suffix.lower() if kind in ("energy", "angle") else suffix
    if key not in table:
        lowered = {k.lower(): v for k, v in table.items()}
        if suffix.lower() not in lowered:
            allowed = ", ".join(sorted(table)) or "none"
            raise ValueError(f"unknown unit {suffix!r} for {kind} (allowed: {allowed})")
        return number * lowered[suffix.lower()]
    return number * table[key]
