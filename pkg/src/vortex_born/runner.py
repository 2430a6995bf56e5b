"""Evaluate a scenario over its grid and assemble an :class:`AngularTable`."""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from . import scattering as sc
from .beams import density, luminosity
from .errors import NotConverged, RegimeWarning
from .quadrature import Diagnostics
from .table import AngularTable

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNCONVERGED = 3
EXIT_IO = 4

VALUE_KIND = {
    "events": "events_per_sr",
    "dcs": "dcs_length2_per_sr",
    "ratio_r": "ratio",
    "asymmetry": "asymmetry",
    "density": "density_per_length2",
    "total": "cross_section_length2",
}


def resolve_jobs(jobs=None):
    """``--jobs`` value, else ``VORTEX_BORN_JOBS``, else 1."""
    if jobs is None:
        env = os.environ.get("VORTEX_BORN_JOBS")
        jobs = int(env) if env else 1
    return max(1, int(jobs))


def _with_offset(target, b):
    if b is None:
        return target
    if isinstance(target, sc.SinglePotential):
        return replace(target, b=b)
    if isinstance(target, sc.MesoscopicGaussian):
        return replace(target, b0=b)
    return target


def _observable(cfg, theta, phi, b, diag):
    beam, pot, budget = cfg.beam, cfg.potential, cfg.budget
    target = _with_offset(cfg.target, b)
    direction = sc.Direction(theta, phi)
    obs, method = cfg.observable, cfg.method
    if obs == "events":
        if isinstance(target, sc.SinglePotential):
            if method == "wide":
                return sc.events_single_wide(beam, pot, target, direction, budget, diag)
            return sc.events_single(beam, pot, target, direction, budget, diag)
        if cfg.limit == "small":
            return sc.events_small_target(beam, pot, target, direction, budget, diag)
        if cfg.limit == "large":
            return sc.events_large_target(beam, pot, target, direction, budget, diag)
        return sc.events_mesoscopic(beam, pot, target, direction, budget, diag)
    if obs == "dcs":
        if cfg.superposition is not None:
            return sc.dcs_superposition(cfg.superposition, pot, direction, budget, diag)
        if isinstance(target, sc.Macroscopic):
            return sc.dcs_macroscopic(beam, pot, direction, budget, "general" if method == "auto" else method, diag)
        if method == "wide":
            return sc.events_single_wide(beam, pot, target, direction, budget, diag) / luminosity(beam, budget)
        return sc.cross_section_single(beam, pot, target, direction, budget, diag)
    if obs == "ratio_r":
        return sc.ratio_r(beam, target, budget, diag)
    if obs == "asymmetry":
        return sc.asymmetry_a(cfg.superposition, pot, theta, budget, diag)
    if obs == "density":
        return density(beam, 0.0 if b is None else b, budget, diag)
    if obs == "total":
        if cfg.superposition is not None:
            return sc.total_superposition(cfg.superposition, pot, budget, diag)
        return sc.total_macroscopic(beam, pot, budget, "wide" if method == "auto" else method, diag)
    raise ValueError(f"unknown observable {obs!r}")


def evaluate_point(cfg, theta_deg, phi_deg, b):
    """Value, convergence flag, node count and flags for one grid point."""
    diag = Diagnostics()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        value = _observable(cfg, math.radians(theta_deg), math.radians(phi_deg), b, diag)
    for w in caught:
        if issubclass(w.category, NotConverged):
            diag.converged = False
            diag.flag(str(w.message))
        elif issubclass(w.category, RegimeWarning):
            diag.flag(str(w.message))
    return float(value), diag.converged, diag.nodes, tuple(diag.flags)


def _evaluate_packed(args):
    return evaluate_point(*args)


def _normalise(cfg, points, values):
    if cfg.normalize == "none":
        return values
    if cfg.normalize == "peak":
        peak = max(abs(v) for v in values)
        return [v / peak for v in values] if peak > 0 else values
    if cfg.normalize == "rho0":
        ref = density(cfg.beam.with_m(0), 0.0, cfg.budget)
        return [v / ref for v in values]
    # phi0: divide by the phi = 0 value of the same (b, theta)
    ref = {(b, th): v for (th, ph, b), v in zip(points, values) if ph == 0.0}
    return [v / ref[(b, th)] if ref[(b, th)] != 0 else math.nan for (th, ph, b), v in zip(points, values)]


def run_scenario(cfg, jobs=1):
    """Evaluate every grid point; return ``(table, exit_code)``.

    Points may be computed concurrently; rows are always in grid order.
    """
    points = list(cfg.grid.points())
    jobs = resolve_jobs(jobs)
    tasks = [(cfg, th, ph, b) for th, ph, b in points]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            results = list(pool.map(_evaluate_packed, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_evaluate_packed(t) for t in tasks]
    values = _normalise(cfg, points, [r[0] for r in results])
    flags = []
    for r in results:
        for f in r[3]:
            if f not in flags:
                flags.append(f)
    table = AngularTable(
        scenario=cfg.name,
        scenario_hash=cfg.scenario_hash,
        value_kind="ratio" if cfg.normalize != "none" else VALUE_KIND[cfg.observable],
        rel_tol=cfg.budget.rel_tol,
        theta_deg=[p[0] for p in points],
        phi_deg=[p[1] for p in points],
        b_a0=None if cfg.grid.b is None else [p[2] for p in points],
        values=values,
        converged=[r[1] for r in results],
        nodes=[r[2] for r in results],
        flags=flags,
    )
    return table, EXIT_OK if table.all_converged else EXIT_UNCONVERGED
