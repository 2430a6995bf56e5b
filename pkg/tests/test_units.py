import math

import pytest

from vortex_born.units import (
    BOHR_RADIUS_NM,
    HARTREE_EV,
    NM,
    a0_to_nm,
    kinetic_energy,
    momentum_from_energy,
    nm_to_a0,
    parse_quantity,
)


def test_nanometre_in_bohr():
    assert NM == pytest.approx(18.8973, abs=1e-4)
    assert nm_to_a0(1.0) == pytest.approx(18.8973, abs=1e-4)
    assert a0_to_nm(nm_to_a0(3.7)) == pytest.approx(3.7, rel=1e-15)


def test_beam_energy_of_ten_inverse_bohr():
    # p = 10 / a0 carries 50 Hartree, about 1.4 keV
    e_ev = kinetic_energy(10.0) * HARTREE_EV
    assert e_ev == pytest.approx(1360.57, abs=0.01)
    assert round(e_ev / 1e3, 1) == 1.4
    assert momentum_from_energy(parse_quantity("1.3605693 keV", "energy")) == pytest.approx(10.0, rel=1e-7)


@pytest.mark.parametrize("text,kind,expected", [
    ("10 /a0", "momentum", 10.0),
    ("10 1/a0", "momentum", 10.0),
    ("0.5 nm^-1", "momentum", 0.5 * BOHR_RADIUS_NM),
    ("0.5 /nm", "momentum", 0.5 * BOHR_RADIUS_NM),
    ("2 nm", "length", 2 * NM),
    ("2 a0", "length", 2.0),
    ("1 angstrom", "length", 0.1 * NM),
    ("15 deg", "angle", math.radians(15)),
    ("0.3 rad", "angle", 0.3),
    ("50 Ha", "energy", 50.0),
    ("27.211386245988 eV", "energy", 1.0),
    ("1e-3", "dimensionless", 1e-3),
])
def test_parse(text, kind, expected):
    assert parse_quantity(text, kind) == pytest.approx(expected, rel=1e-14)


def test_bare_numbers():
    assert parse_quantity(30, "angle") == pytest.approx(math.radians(30))
    assert parse_quantity(2.5, "length") == 2.5


@pytest.mark.parametrize("value,kind", [("3 furlongs", "length"), ("nm", "length"), (True, "length"),
                                        ("1 nm", "momentum"), ([1], "length")])
def test_parse_errors(value, kind):
    with pytest.raises(ValueError):
        parse_quantity(value, kind)


def test_unknown_kind():
    with pytest.raises(ValueError):
        parse_quantity(1.0, "charge")


def test_negative_energy():
    with pytest.raises(ValueError):
        momentum_from_energy(-1.0)
