"""Angular tables and their CSV / JSON serialisation.

Output is byte-for-byte reproducible: floats are written with ``repr``, rows
keep grid order and no timestamps are recorded.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from . import __version__

UNITS = "hartree atomic units (length a0, momentum 1/a0); angles in degrees"

VALUE_KINDS = {
    "events_per_sr",
    "dcs_length2_per_sr",
    "ratio",
    "asymmetry",
    "density_per_length2",
    "cross_section_length2",
}


@dataclass
class AngularTable:
    scenario: str
    scenario_hash: str
    value_kind: str
    rel_tol: float
    theta_deg: list = field(default_factory=list)
    phi_deg: list = field(default_factory=list)
    values: list = field(default_factory=list)
    converged: list = field(default_factory=list)
    nodes: list = field(default_factory=list)
    b_a0: list | None = None
    flags: list = field(default_factory=list)

    def __post_init__(self):
        if self.value_kind not in VALUE_KINDS:
            raise ValueError(f"unknown value kind {self.value_kind!r}")

    @property
    def all_converged(self):
        return all(self.converged)

    def metadata(self):
        return {
            "scenario": self.scenario,
            "scenario_hash": self.scenario_hash,
            "units": UNITS,
            "value_kind": self.value_kind,
            "rel_tol": self.rel_tol,
            "code_version": __version__,
        }

    def columns(self):
        cols = ["theta_deg", "phi_deg"]
        if self.b_a0 is not None:
            cols.append("b_a0")
        return cols + ["value", "converged", "nodes"]

    def rows(self):
        for i, value in enumerate(self.values):
            row = [self.theta_deg[i], self.phi_deg[i]]
            if self.b_a0 is not None:
                row.append(self.b_a0[i])
            yield row + [value, bool(self.converged[i]), int(self.nodes[i])]


def to_csv(table):
    buf = io.StringIO()
    for key, value in table.metadata().items():
        buf.write(f"# {key}: {value!r}\n" if isinstance(value, float) else f"# {key}: {value}\n")
    for flag in table.flags:
        buf.write(f"# flag: {flag}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns())
    for row in table.rows():
        writer.writerow([repr(float(x)) if isinstance(x, float) else str(x).lower() if isinstance(x, bool) else x
                         for x in row])
    return buf.getvalue()


def to_json(table):
    meta = table.metadata()
    meta["flags"] = list(table.flags)
    records = [dict(zip(table.columns(), row)) for row in table.rows()]
    return json.dumps({"metadata": meta, "records": records}, indent=2) + "\n"


def read_csv(text):
    """Parse a table written by :func:`to_csv` into ``(metadata, rows)``."""
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = value
        else:
            body.append(line)
    reader = csv.DictReader(body)
    return meta, list(reader)


def write_table(table, path, fmt="csv"):
    text = to_json(table) if fmt == "json" else to_csv(table)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
