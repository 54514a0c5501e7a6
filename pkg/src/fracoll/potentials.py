"""Radial interaction potentials V(R).

All potentials vanish as R -> infinity (tabulated ones: at their last point,
by the user's convention), so photon detunings are measured from the
asymptotic atomic transition energies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConfigurationError, DomainError

__all__ = ["InversePower", "Morse", "Tabulated", "PotentialModel", "potential_from_dict", "DEFAULT_DOMAIN"]

DEFAULT_DOMAIN = (1e-2, 1e3)


def _check_domain(domain):
    lo, hi = domain
    if not (0 < lo < hi and np.isfinite(hi)):
        raise DomainError(f"invalid radial domain {domain}")


@dataclass(frozen=True)
class InversePower:
    """V(R) = coefficient / R**power (coefficient > 0 repulsive)."""

    coefficient: float
    power: float
    domain: tuple[float, float] = DEFAULT_DOMAIN
    name: str = "inverse_power"

    def __post_init__(self):
        _check_domain(self.domain)

    def __call__(self, R):
        return self.coefficient / np.asarray(R, dtype=float) ** self.power

    def derivative(self, R):
        return -self.power * self.coefficient / np.asarray(R, dtype=float) ** (self.power + 1)


@dataclass(frozen=True)
class Morse:
    """V(R) = depth * (1 - exp(-alpha (R - r_eq)))**2 - depth."""

    depth: float
    alpha: float
    r_eq: float
    domain: tuple[float, float] = DEFAULT_DOMAIN
    name: str = "morse"

    def __post_init__(self):
        _check_domain(self.domain)
        if self.depth < 0 or self.alpha <= 0:
            raise DomainError("Morse depth must be >= 0 and alpha > 0")

    def __call__(self, R):
        x = np.exp(-self.alpha * (np.asarray(R, dtype=float) - self.r_eq))
        return self.depth * (1.0 - x) ** 2 - self.depth

    def derivative(self, R):
        x = np.exp(-self.alpha * (np.asarray(R, dtype=float) - self.r_eq))
        return 2.0 * self.depth * self.alpha * x * (1.0 - x)


@dataclass(frozen=True)
class Tabulated:
    """Cubic-spline interpolation of (R, V) samples on a strictly increasing grid."""

    r: tuple[float, ...]
    v: tuple[float, ...]
    name: str = "tabulated"
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if r.ndim != 1 or r.shape != v.shape or r.size < 4:
            raise DomainError("tabulated potential needs at least four (R, V) pairs")
        if np.any(np.diff(r) <= 0):
            raise DomainError("tabulated R grid must be strictly increasing")
        if r[0] <= 0:
            raise DomainError("tabulated R grid must be positive")
        object.__setattr__(self, "r", tuple(r))
        object.__setattr__(self, "v", tuple(v))
        object.__setattr__(self, "_spline", CubicSpline(r, v))

    @property
    def domain(self) -> tuple[float, float]:
        return (self.r[0], self.r[-1])

    def __call__(self, R):
        return self._spline(np.asarray(R, dtype=float))

    def derivative(self, R):
        return self._spline(np.asarray(R, dtype=float), 1)

    @classmethod
    def from_file(cls, path, length_scale: float = 1.0, energy_scale: float = 1.0) -> "Tabulated":
        """Read two whitespace-separated columns (R, V); '#' starts a comment line."""
        try:
            data = np.loadtxt(Path(path), comments="#", ndmin=2)
        except OSError as exc:
            raise ConfigurationError(f"cannot read potential table {path}: {exc}") from exc
        except ValueError as exc:
            raise ConfigurationError(f"malformed potential table {path}: {exc}") from exc
        if data.shape[1] != 2:
            raise ConfigurationError(f"{path}: expected two columns, found {data.shape[1]}")
        return cls(tuple(data[:, 0] * length_scale), tuple(data[:, 1] * energy_scale))


PotentialModel = InversePower | Morse | Tabulated


def potential_from_dict(params: dict, length_scale: float = 1.0, energy_scale: float = 1.0,
                        base_dir: Path | None = None) -> PotentialModel:
    """Build a potential from a config mapping, converting to internal units.

    ``length_scale`` and ``energy_scale`` multiply config values to give
    internal (atomic) units.
    """
    params = dict(params)
    form = params.pop("form", None)
    domain = params.pop("domain", None)
    dom = DEFAULT_DOMAIN if domain is None else tuple(float(x) * length_scale for x in domain)
    try:
        if form == "inverse_power":
            n = float(params.pop("n"))
            c = float(params.pop("C")) * energy_scale * length_scale**n
            pot = InversePower(c, n, dom)
        elif form == "morse":
            pot = Morse(float(params.pop("depth")) * energy_scale, float(params.pop("alpha")) / length_scale,
                        float(params.pop("r_eq")) * length_scale, dom)
        elif form == "tabulated":
            path = Path(params.pop("file"))
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            pot = Tabulated.from_file(path, length_scale, energy_scale)
        else:
            raise ConfigurationError(f"unknown potential form {form!r}; use inverse_power, morse or tabulated")
    except KeyError as exc:
        raise ConfigurationError(f"potential of form {form!r} is missing parameter {exc}") from None
    if params:
        raise ConfigurationError(f"unknown potential keys: {', '.join(sorted(params))}")
    return pot
