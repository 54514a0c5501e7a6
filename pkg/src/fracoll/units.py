"""Conversion of configured quantities to the internal unit system (Hartree atomic units)."""

from __future__ import annotations

from dataclasses import dataclass

from scipy import constants as sc

from .errors import ConfigurationError

__all__ = ["UnitSystem", "ENERGY_UNITS", "LENGTH_UNITS", "MASS_UNITS", "TIME_UNITS", "INTERNAL_UNITS"]

_HARTREE = sc.physical_constants["Hartree energy"][0]
_BOHR = sc.physical_constants["Bohr radius"][0]
_AU_TIME = sc.physical_constants["atomic unit of time"][0]

# multiply a value in the named unit to get atomic units
ENERGY_UNITS = {
    "hartree": 1.0,
    "eV": sc.eV / _HARTREE,
    "cm-1": sc.h * sc.c * 100.0 / _HARTREE,
    "K": sc.k / _HARTREE,
}
LENGTH_UNITS = {"bohr": 1.0, "angstrom": sc.angstrom / _BOHR}
MASS_UNITS = {"me": 1.0, "amu": sc.atomic_mass / sc.m_e}
TIME_UNITS = {"au": 1.0, "fs": sc.femto / _AU_TIME, "ps": sc.pico / _AU_TIME}

INTERNAL_UNITS = {"energy": "hartree", "length": "bohr", "mass": "me", "time": "au"}


def _lookup(table: dict, name: str, kind: str) -> float:
    try:
        return table[name]
    except KeyError:
        raise ConfigurationError(f"unknown {kind} unit {name!r}; choose from {', '.join(table)}") from None


@dataclass(frozen=True)
class UnitSystem:
    """Units in which configuration values are written."""

    energy: str = "hartree"
    length: str = "bohr"
    mass: str = "me"
    time: str = "au"

    def __post_init__(self):
        self.scales()

    def scales(self) -> dict[str, float]:
        return {
            "energy": _lookup(ENERGY_UNITS, self.energy, "energy"),
            "length": _lookup(LENGTH_UNITS, self.length, "length"),
            "mass": _lookup(MASS_UNITS, self.mass, "mass"),
            "time": _lookup(TIME_UNITS, self.time, "time"),
        }

    def to_internal(self, kind: str, value: float) -> float:
        return value * self.scales()[kind]

    def from_internal(self, kind: str, value: float) -> float:
        return value / self.scales()[kind]

    def describe(self) -> dict:
        return {"input": {"energy": self.energy, "length": self.length, "mass": self.mass,
                          "time": self.time},
                "internal": dict(INTERNAL_UNITS)}
