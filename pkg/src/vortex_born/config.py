"""Scenario configuration: a flat TOML file with dotted section keys.

Example::

    name = "fig3-b0-m1"
    observable = "events"
    beam.p_i = "10 /a0"
    beam.theta_k = "10 deg"
    beam.sigma_ratio = 0.2
    beam.m = 1
    potential.kind = "hydrogen"
    target.kind = "single"
    target.b = "0 a0"
    grid.theta_min = 0
    grid.theta_max = 40
    grid.theta_steps = 81

Quantities accept unit suffixes (see :func:`vortex_born.units.parse_quantity`);
grid angles are in degrees.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass, replace

import numpy as np

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib

from .beams import BeamSpec, SuperpositionSpec
from .errors import ConfigError, DomainError
from .potentials import Hydrogen1s, Yukawa
from .quadrature import TABLE_BUDGET, QuadratureBudget
from .scattering import Macroscopic, MesoscopicGaussian, SinglePotential
from .units import momentum_from_energy, parse_quantity

OBSERVABLES = ("events", "dcs", "ratio_r", "asymmetry", "density", "total")
METHODS = ("auto", "general", "wide", "closed")
NORMALIZE = ("none", "peak", "phi0", "rho0")
LIMITS = ("exact", "small", "large")
FORMATS = ("csv", "json")

# section -> key -> kind ("length", ..., or "int", "str", "float", "deg")
SCHEMA = {
    "": {"name": "str", "observable": "str", "method": "str", "normalize": "str"},
    "beam": {"p_i": "momentum", "energy": "energy", "kappa0": "momentum", "theta_k": "angle",
             "sigma_kappa": "momentum", "sigma_ratio": "float", "m": "int", "n_electrons": "float",
             "sigma_z": "length", "a_field": "length"},
    "potential": {"kind": "str", "a0": "length", "V0": "strength", "mu": "momentum"},
    "target": {"kind": "str", "b": "length", "phi_b": "angle", "b0": "length", "phi_b0": "angle",
               "sigma_b": "length", "limit": "str"},
    "superposition": {"m1": "int", "m2": "int", "c1": "float", "c2": "float",
                      "alpha1": "angle", "alpha2": "angle"},
    "grid": {"theta_min": "deg", "theta_max": "deg", "theta_steps": "int",
             "phi_min": "deg", "phi_max": "deg", "phi_steps": "int",
             "b_min": "length", "b_max": "length", "b_steps": "int"},
    "budget": {"rel_tol": "float", "abs_tol": "float", "max_nodes": "int"},
    "output": {"path": "str", "format": "str"},
}


@dataclass(frozen=True)
class Grid:
    theta_deg: tuple
    phi_deg: tuple
    b: tuple | None = None

    def points(self):
        """Grid points in output order: b outermost, then theta, then phi."""
        bs = self.b if self.b is not None else (None,)
        for b in bs:
            for th in self.theta_deg:
                for ph in self.phi_deg:
                    yield th, ph, b


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    observable: str
    method: str
    normalize: str
    beam: BeamSpec
    potential: object
    target: object
    limit: str
    superposition: SuperpositionSpec | None
    grid: Grid
    budget: QuadratureBudget
    output_path: str | None
    output_format: str
    raw: dict

    @property
    def scenario_hash(self):
        blob = json.dumps(self.raw, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def with_overrides(self, rel_tol=None, output_format=None):
        cfg = self
        if rel_tol is not None:
            raw = json.loads(json.dumps(cfg.raw))
            raw.setdefault("budget", {})["rel_tol"] = rel_tol
            cfg = replace(cfg, budget=replace(cfg.budget, rel_tol=rel_tol), raw=raw)
        if output_format is not None:
            if output_format not in FORMATS:
                raise ConfigError(f"format must be one of {FORMATS}", field="output.format")
            cfg = replace(cfg, output_format=output_format)
        return cfg


def _locate(text, dotted):
    """Line number (1-based) where ``dotted`` is assigned, or None."""
    if text is None:
        return None
    section = ""
    head = re.compile(r"^\s*\[\s*([A-Za-z0-9_.]+)\s*\]")
    assign = re.compile(r"^\s*([A-Za-z0-9_.\"]+)\s*=")
    for number, line in enumerate(text.splitlines(), start=1):
        m = head.match(line)
        if m:
            section = m.group(1)
            continue
        m = assign.match(line)
        if m:
            key = m.group(1).replace('"', "")
            full = f"{section}.{key}" if section else key
            if full == dotted:
                return number
    return None


class _Reader:
    def __init__(self, raw, text):
        self.raw = raw
        self.text = text

    def error(self, message, dotted):
        return ConfigError(message, field=dotted, line=_locate(self.text, dotted))

    def section(self, name):
        if name == "":
            return {k: v for k, v in self.raw.items() if not isinstance(v, dict)}
        sec = self.raw.get(name, {})
        if not isinstance(sec, dict):
            raise self.error("expected a section of dotted keys", name)
        return sec

    def get(self, section, key, default=None, required=False):
        dotted = f"{section}.{key}" if section else key
        sec = self.section(section)
        if key not in sec:
            if required:
                raise ConfigError("missing required field", field=dotted)
            return default
        kind = SCHEMA[section][key]
        value = sec[key]
        try:
            if kind == "str":
                if not isinstance(value, str):
                    raise ValueError("expected a string")
                return value
            if kind == "int":
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ValueError("expected an integer")
                return value
            if kind == "float":
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ValueError("expected a number")
                return float(value)
            if kind == "deg":
                return _degrees(value)
            return parse_quantity(value, kind)
        except ValueError as exc:
            raise self.error(str(exc), dotted) from None

    def check_unknown(self):
        for key, value in self.raw.items():
            if isinstance(value, dict):
                if key not in SCHEMA or key == "":
                    raise self.error("unknown section", key)
                for sub in value:
                    if sub not in SCHEMA[key]:
                        raise self.error("unknown field", f"{key}.{sub}")
            elif key not in SCHEMA[""]:
                raise self.error("unknown field", key)


def _degrees(value):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    rad = parse_quantity(value, "angle")
    if isinstance(value, str) and value.strip().lower().endswith("rad"):
        return math.degrees(rad)
    # bare or "deg": recover the number exactly
    return float(re.match(r"\s*([-+0-9.eE]+)", value).group(1))


def _choice(reader, section, key, options, default):
    value = reader.get(section, key, default)
    if value not in options:
        dotted = f"{section}.{key}" if section else key
        raise reader.error(f"must be one of {', '.join(options)} (got {value!r})", dotted)
    return value


def _build_beam(r):
    p_i = r.get("beam", "p_i")
    energy = r.get("beam", "energy")
    if (p_i is None) == (energy is None):
        raise r.error("give exactly one of beam.p_i, beam.energy", "beam.p_i")
    if p_i is None:
        p_i = momentum_from_energy(energy)
    kappa0 = r.get("beam", "kappa0")
    theta_k = r.get("beam", "theta_k")
    if (kappa0 is None) == (theta_k is None):
        raise r.error("give exactly one of beam.kappa0, beam.theta_k", "beam.kappa0")
    if kappa0 is None:
        if not 0.0 <= theta_k < 0.5 * math.pi:
            raise r.error("theta_k must lie in [0, 90) deg", "beam.theta_k")
        kappa0 = p_i * math.tan(theta_k)
    sigma = r.get("beam", "sigma_kappa")
    ratio = r.get("beam", "sigma_ratio")
    if sigma is None and ratio is None:
        raise ConfigError("missing required field (or give beam.sigma_ratio)", field="beam.sigma_kappa")
    if sigma is not None and ratio is not None:
        raise r.error("give only one of beam.sigma_kappa, beam.sigma_ratio", "beam.sigma_kappa")
    if sigma is None:
        sigma = ratio * kappa0
    kw = {"m": r.get("beam", "m", 0), "n_electrons": r.get("beam", "n_electrons", 1.0)}
    for key in ("sigma_z", "a_field"):
        value = r.get("beam", key)
        if value is not None:
            kw[key] = value
    try:
        return BeamSpec(kappa0=kappa0, sigma_kappa=sigma, p_i=p_i, **kw)
    except DomainError as exc:
        raise r.error(str(exc), "beam.sigma_kappa" if "sigma" in str(exc) else "beam") from None


def _build_potential(r):
    kind = _choice(r, "potential", "kind", ("hydrogen", "yukawa"), None)
    try:
        if kind == "hydrogen":
            return Hydrogen1s(a0=r.get("potential", "a0", 1.0))
        return Yukawa(V0=r.get("potential", "V0", required=True), mu=r.get("potential", "mu", required=True))
    except DomainError as exc:
        raise r.error(str(exc), "potential") from None


def _build_target(r):
    kind = _choice(r, "target", "kind", ("single", "mesoscopic", "macroscopic"), "single")
    limit = _choice(r, "target", "limit", LIMITS, "exact")
    try:
        if kind == "single":
            return SinglePotential(b=r.get("target", "b", 0.0), phi_b=r.get("target", "phi_b", 0.0)), limit
        if kind == "mesoscopic":
            return MesoscopicGaussian(b0=r.get("target", "b0", 0.0),
                                      sigma_b=r.get("target", "sigma_b", required=True),
                                      phi_b0=r.get("target", "phi_b0", 0.0)), limit
    except DomainError as exc:
        raise r.error(str(exc), "target") from None
    return Macroscopic(), limit


def _build_superposition(r, beam):
    if "superposition" not in r.raw:
        return None
    c1 = r.get("superposition", "c1", 1.0 / math.sqrt(2.0))
    c2 = r.get("superposition", "c2", 1.0 / math.sqrt(2.0))
    try:
        return SuperpositionSpec(
            base=beam,
            m1=r.get("superposition", "m1", required=True),
            m2=r.get("superposition", "m2", required=True),
            c1_abs=c1, c2_abs=c2,
            alpha1=r.get("superposition", "alpha1", 0.0),
            alpha2=r.get("superposition", "alpha2", 0.0),
        )
    except DomainError as exc:
        raise r.error(str(exc), "superposition.c1") from None


def _axis(r, name, default_min=0.0):
    lo = r.get("grid", f"{name}_min", default_min)
    hi = r.get("grid", f"{name}_max", lo)
    steps = r.get("grid", f"{name}_steps", 1 if hi == lo else None)
    if steps is None:
        raise ConfigError("missing required field", field=f"grid.{name}_steps")
    if steps < 1:
        raise r.error("grid steps must be >= 1", f"grid.{name}_steps")
    if steps == 1:
        return (float(lo),)
    return tuple(float(x) for x in np.linspace(lo, hi, steps))


def _build_grid(r):
    theta = _axis(r, "theta")
    if any(not 0.0 <= t <= 180.0 for t in theta):
        raise r.error("theta must lie in [0, 180] deg", "grid.theta_max")
    phi = _axis(r, "phi")
    b = None
    if "b_min" in r.section("grid") or "b_max" in r.section("grid"):
        b = _axis(r, "b")
        if any(x < 0 for x in b):
            raise r.error("lengths must be non-negative", "grid.b_min")
    return Grid(theta, phi, b)


def from_dict(raw, text=None):
    """Validate a parsed configuration mapping and build a :class:`ScenarioConfig`."""
    r = _Reader(raw, text)
    r.check_unknown()
    name = r.get("", "name", "scenario")
    observable = _choice(r, "", "observable", OBSERVABLES, None)
    method = _choice(r, "", "method", METHODS, "auto")
    normalize = _choice(r, "", "normalize", NORMALIZE, "none")
    beam = _build_beam(r)
    potential = _build_potential(r)
    target, limit = _build_target(r)
    sup = _build_superposition(r, beam)
    grid = _build_grid(r)
    try:
        budget = QuadratureBudget(
            rel_tol=r.get("budget", "rel_tol", TABLE_BUDGET.rel_tol),
            abs_tol=r.get("budget", "abs_tol", TABLE_BUDGET.abs_tol),
            max_nodes=r.get("budget", "max_nodes", TABLE_BUDGET.max_nodes),
        )
    except DomainError as exc:
        raise r.error(str(exc), "budget") from None
    fmt = _choice(r, "output", "format", FORMATS, "csv")

    # cross-field checks
    if method == "closed" and not isinstance(target, Macroscopic):
        raise r.error("method 'closed' exists only for macroscopic targets", "method")
    if observable == "asymmetry" and sup is None:
        raise r.error("observable 'asymmetry' needs a [superposition] section", "observable")
    if observable == "ratio_r" and not isinstance(target, MesoscopicGaussian):
        raise r.error("observable 'ratio_r' needs a mesoscopic target", "target.kind")
    if observable == "events" and isinstance(target, Macroscopic):
        raise r.error("a macroscopic target has no event count, use observable 'dcs'", "observable")
    if observable in ("events",) and sup is not None:
        raise r.error("superpositions are supported for macroscopic dcs, asymmetry and total", "superposition")
    if sup is not None and not isinstance(target, Macroscopic):
        raise r.error("superpositions need a macroscopic target", "target.kind")
    if observable == "total" and not isinstance(target, Macroscopic):
        raise r.error("observable 'total' needs a macroscopic target", "target.kind")
    if observable == "dcs" and isinstance(target, MesoscopicGaussian):
        raise r.error("use observable 'events' or 'ratio_r' for a mesoscopic target", "observable")
    if normalize == "phi0" and 0.0 not in grid.phi_deg:
        raise r.error("normalize 'phi0' needs phi = 0 on the grid", "normalize")

    return ScenarioConfig(
        name=name, observable=observable, method=method, normalize=normalize,
        beam=beam, potential=potential, target=target, limit=limit, superposition=sup,
        grid=grid, budget=budget, output_path=r.get("output", "path"), output_format=fmt, raw=raw,
    )


def loads(text):
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(f"syntax error: {exc}", line=int(m.group(1)) if m else None) from None
    return from_dict(raw, text)


def load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())
