"""Scan configuration: YAML ingestion, validation, defaults and unit conversion.

Layout (every section optional except ``light`` and ``scan``)::

    channels: ["Σ→Σ→Π", "S-P-D"]          # default: the five worked channels
    light:
      mode: opo                          # opo | weak_limit | classical
      kappa: 1.0                         # opo only, > 0
      phi: 0.0                           # radians; "pi", "3*pi/4" accepted
      g: null                            # fixed g(tau), overrides the envelope
      envelope: {model: exponential, coherence_time: 100.0}
      delay: 0.0                         # optical delay line, time units
    scan:                                # one or two of phi, kappa, g, delay
      phi: {start: 0, stop: 2*pi, count: 9}
    kinematics:                          # default: recoil
      recoil: true
      # explicit: {R1, R2, case, xi_pm, xi_minus, xi_plus, tau_pm, tau_minus, tau_plus, w1, w2, j0}
      # trajectory: {collision_energy, impact_parameter, reduced_mass,
      #              ground, intermediate, final, photon_detunings, case,
      #              R1_index, R2_index, j0, reference}
    units: {energy: hartree, length: bohr, mass: me, time: au}
    output: {format: csv, path: null}
    workers: 1

Swept axes are combined as a Cartesian product, the first listed in the
order phi, kappa, g, delay varying slowest.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .channels import WORKED_CHANNELS, ChannelSpec, CollisionKinematics, TrajectoryCase, parse_channel
from .errors import ConfigurationError, DomainError
from .light import ConstantEnvelope, ExponentialEnvelope, RectangularEnvelope
from .potentials import InversePower, Tabulated, potential_from_dict
from .trajectory import TrajectoryInputs
from .units import UnitSystem

__all__ = [
    "ScanAxis", "LightSettings", "KinematicsSettings", "OutputSettings", "ScanConfig",
    "SCAN_PARAMETERS", "load_config", "parse_config", "parse_number",
]

SCAN_PARAMETERS = ("phi", "kappa", "g", "delay")
LIGHT_MODES = ("opo", "weak_limit", "classical")

_PI_EXPR = re.compile(r"^\s*([+-]?)\s*((?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_number(value, where: str) -> float:
    """Float from a number or a string such as "pi", "-pi/2", "2*pi", "0.25pi"."""
    if isinstance(value, bool):
        raise ConfigurationError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        out = float(value)
    elif isinstance(value, str):
        text = value.strip()
        m = _PI_EXPR.match(text)
        try:
            if m:
                sign = -1.0 if m.group(1) == "-" else 1.0
                coef = float(m.group(2)) if m.group(2) else 1.0
                out = sign * coef * np.pi / (float(m.group(3)) if m.group(3) else 1.0)
            else:
                out = float(text)
        except (ValueError, ZeroDivisionError):
            raise ConfigurationError(f"{where}: cannot read {value!r} as a number") from None
    else:
        raise ConfigurationError(f"{where}: expected a number, got {value!r}")
    if not np.isfinite(out):
        raise ConfigurationError(f"{where}: value must be finite")
    return out


def _section(data, where: str, allowed: tuple[str, ...]) -> dict:
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"{where}: expected a mapping")
    unknown = sorted(str(k) for k in data if k not in allowed)
    if unknown:
        raise ConfigurationError(
            f"unknown key(s) in {where}: {', '.join(unknown)}; allowed: {', '.join(allowed)}"
        )
    return dict(data)


@dataclass(frozen=True)
class ScanAxis:
    name: str
    values: tuple[float, ...]

    @classmethod
    def from_entry(cls, name: str, entry, scale: float = 1.0) -> "ScanAxis":
        where = f"scan.{name}"
        if isinstance(entry, list):
            vals = [parse_number(v, where) for v in entry]
            if not vals:
                raise ConfigurationError(f"{where}: empty value list")
        else:
            s = _section(entry, where, ("start", "stop", "count", "values"))
            if "values" in s:
                if len(s) > 1:
                    raise ConfigurationError(f"{where}: give either values or start/stop/count")
                return cls.from_entry(name, s["values"], scale)
            missing = [k for k in ("start", "count") if k not in s]
            if missing:
                raise ConfigurationError(f"{where}: missing {', '.join(missing)}")
            count = s["count"]
            if isinstance(count, bool) or not isinstance(count, int) or count < 1:
                raise ConfigurationError(f"{where}.count must be an integer >= 1")
            start = parse_number(s["start"], f"{where}.start")
            stop = parse_number(s.get("stop", s["start"]), f"{where}.stop")
            if count == 1 and stop != start:
                raise ConfigurationError(f"{where}: count 1 needs start == stop")
            vals = list(np.linspace(start, stop, count))
        return cls(name, tuple(float(v) * scale for v in vals))


@dataclass(frozen=True)
class LightSettings:
    mode: str
    kappa: float | None
    phi: float
    g: float | None
    envelope: object
    delay: float


@dataclass(frozen=True)
class KinematicsSettings:
    source: str  # recoil | explicit | trajectory
    explicit: CollisionKinematics | None = None
    trajectory: TrajectoryInputs | None = None
    case: TrajectoryCase = TrajectoryCase.ALL
    R1_index: int | None = None
    R2_index: int | None = None
    j0: float = 0
    reference: tuple[float, float] = (1.0, 1.0)


@dataclass(frozen=True)
class OutputSettings:
    format: str = "csv"
    path: str | None = None


@dataclass(frozen=True)
class ScanConfig:
    channels: tuple[ChannelSpec, ...]
    light: LightSettings
    axes: tuple[ScanAxis, ...]
    kinematics: KinematicsSettings
    units: UnitSystem
    output: OutputSettings
    workers: int = 1
    echo: dict = field(default_factory=dict, compare=False)

    @property
    def n_points(self) -> int:
        return int(np.prod([len(a.values) for a in self.axes]))


def load_config(path) -> ScanConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"{path}: invalid YAML: {exc}") from exc
    return parse_config(data, base_dir=path.parent)


def parse_config(data, base_dir: Path | None = None) -> ScanConfig:
    top = _section(data, "config", ("channels", "light", "scan", "kinematics", "units", "output", "workers"))
    units = _parse_units(top.get("units"))
    sc = units.scales()
    channels = _parse_channels(top.get("channels"))
    light = _parse_light(top.get("light"), sc)
    axes = _parse_scan(top.get("scan"), light, sc)
    kin = _parse_kinematics(top.get("kinematics"), sc, base_dir)
    output = _parse_output(top.get("output"))
    workers = top.get("workers", 1)
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise ConfigurationError("workers must be an integer >= 1")
    echo = {
        "channels": [c.label for c in channels],
        "light": {"mode": light.mode, "kappa": light.kappa, "phi": light.phi, "g": light.g,
                  "envelope": _envelope_echo(light.envelope), "delay": light.delay},
        "scan": {a.name: list(a.values) for a in axes},
        "kinematics": _kinematics_echo(kin),
        "units": units.describe(),
        "output": {"format": output.format, "path": output.path},
    }
    return ScanConfig(channels, light, axes, kin, units, output, workers, echo)


def _parse_units(data) -> UnitSystem:
    s = _section(data, "units", ("energy", "length", "mass", "time"))
    return UnitSystem(**{k: str(v) for k, v in s.items()})


def _parse_channels(data) -> tuple[ChannelSpec, ...]:
    if data is None:
        return WORKED_CHANNELS
    if isinstance(data, str):
        data = [data]
    if not isinstance(data, list) or not data:
        raise ConfigurationError("channels must be a non-empty list of labels")
    chans = tuple(parse_channel(str(c)) for c in data)
    labels = [c.label for c in chans]
    if len(set(labels)) != len(labels):
        raise ConfigurationError("channels are listed more than once")
    for c in chans:
        if not c.dipole_allowed:
            raise ConfigurationError(f"channel {c.label} has no dipole-allowed path")
    return chans


def _parse_envelope(data, time_scale: float):
    if data is None:
        return ExponentialEnvelope(1.0 * time_scale)
    s = _section(data, "light.envelope", ("model", "coherence_time", "half_width"))
    model = s.pop("model", "exponential")
    try:
        if model == "exponential":
            if "half_width" in s:
                raise ConfigurationError("light.envelope: half_width belongs to the rectangular model")
            return ExponentialEnvelope(parse_number(s.get("coherence_time", 1.0), "coherence_time") * time_scale)
        if model == "rectangular":
            if "coherence_time" in s:
                raise ConfigurationError("light.envelope: coherence_time belongs to the exponential model")
            if "half_width" not in s:
                raise ConfigurationError("light.envelope: rectangular model needs half_width")
            return RectangularEnvelope(parse_number(s["half_width"], "half_width") * time_scale)
    except DomainError as exc:
        raise ConfigurationError(f"light.envelope: {exc}") from None
    raise ConfigurationError(f"light.envelope.model {model!r} unknown; use exponential or rectangular")


def _envelope_echo(env) -> dict:
    if isinstance(env, ExponentialEnvelope):
        return {"model": "exponential", "coherence_time": env.coherence_time}
    if isinstance(env, RectangularEnvelope):
        return {"model": "rectangular", "half_width": env.half_width}
    return {"model": "constant", "value": env.value}


def _check_kappa(kappa: float, mode: str, where: str):
    if mode == "opo" and not kappa > 0:
        raise ConfigurationError(
            f"{where}: kappa = {kappa} is not allowed for the OPO model (coth diverges at 0); "
            "set light.mode: weak_limit for the kappa -> 0 law"
        )


def _parse_light(data, sc) -> LightSettings:
    if data is None:
        raise ConfigurationError("missing light section")
    s = _section(data, "light", ("mode", "kappa", "phi", "g", "envelope", "delay", "weak_limit"))
    mode = s.get("mode", "opo")
    if s.get("weak_limit") is True:
        if "mode" in s and mode != "weak_limit":
            raise ConfigurationError("light.weak_limit: true conflicts with light.mode")
        mode = "weak_limit"
    if mode not in LIGHT_MODES:
        raise ConfigurationError(f"light.mode {mode!r} unknown; use {', '.join(LIGHT_MODES)}")
    kappa = None
    if "kappa" in s:
        if mode != "opo":
            raise ConfigurationError(f"light.kappa applies to the opo mode only, not {mode}")
        kappa = parse_number(s["kappa"], "light.kappa")
        _check_kappa(kappa, mode, "light.kappa")
    phi = parse_number(s.get("phi", 0.0), "light.phi")
    g = None if s.get("g") is None else parse_number(s["g"], "light.g")
    if g is not None and g < 0:
        raise ConfigurationError("light.g must be non-negative")
    if g is not None and "envelope" in s:
        raise ConfigurationError("light.g and light.envelope are mutually exclusive")
    envelope = ConstantEnvelope(g) if g is not None else _parse_envelope(s.get("envelope"), sc["time"])
    delay = parse_number(s.get("delay", 0.0), "light.delay") * sc["time"]
    if delay < 0:
        raise ConfigurationError("light.delay must be non-negative")
    return LightSettings(mode, kappa, phi, g, envelope, delay)


def _parse_scan(data, light: LightSettings, sc) -> tuple[ScanAxis, ...]:
    s = _section(data, "scan", SCAN_PARAMETERS)
    if not 1 <= len(s) <= 2:
        raise ConfigurationError("scan must sweep one or two of: " + ", ".join(SCAN_PARAMETERS))
    axes = []
    for name in SCAN_PARAMETERS:
        if name not in s:
            continue
        axis = ScanAxis.from_entry(name, s[name], sc["time"] if name == "delay" else 1.0)
        if name == "kappa":
            if light.mode != "opo":
                raise ConfigurationError("scan.kappa requires light.mode: opo")
            for k in axis.values:
                _check_kappa(k, light.mode, "scan.kappa")
        if name == "g":
            if light.mode == "classical":
                raise ConfigurationError("scan.g has no meaning for classical light")
            if min(axis.values) < 0:
                raise ConfigurationError("scan.g values must be non-negative")
        if name == "delay" and min(axis.values) < 0:
            raise ConfigurationError("scan.delay values must be non-negative")
        axes.append(axis)
    if light.mode == "opo" and light.kappa is None and "kappa" not in s:
        raise ConfigurationError("light.kappa is required for the opo mode (or scan it)")
    return tuple(axes)


_EXPLICIT_KEYS = ("R1", "R2", "case", "xi_pm", "xi_minus", "xi_plus", "tau_pm", "tau_minus", "tau_plus",
                  "w1", "w2", "j0")
_TRAJ_KEYS = ("collision_energy", "impact_parameter", "reduced_mass", "ground", "intermediate", "final",
              "photon_detunings", "case", "R1_index", "R2_index", "j0", "reference")


def _case(value, where) -> TrajectoryCase:
    try:
        return TrajectoryCase(value)
    except ValueError:
        raise ConfigurationError(
            f"{where}: unknown case {value!r}; use " + ", ".join(c.value for c in TrajectoryCase)
        ) from None


def _optional_index(value, where):
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{where} must be an integer")
    return value


def _parse_kinematics(data, sc, base_dir) -> KinematicsSettings:
    s = _section(data, "kinematics", ("recoil", "explicit", "trajectory"))
    given = [k for k in s if s[k] not in (None, False)]
    if len(given) > 1:
        raise ConfigurationError("kinematics: choose exactly one of recoil, explicit, trajectory")
    if not given or given[0] == "recoil":
        return KinematicsSettings("recoil")
    if given[0] == "explicit":
        e = _section(s["explicit"], "kinematics.explicit", _EXPLICIT_KEYS)
        for key in ("R1", "R2"):
            if key not in e:
                raise ConfigurationError(f"kinematics.explicit.{key} is required")
        kw = {}
        for key, val in e.items():
            where = f"kinematics.explicit.{key}"
            if key == "case":
                kw[key] = _case(val, where)
                continue
            v = parse_number(val, where)
            if key in ("R1", "R2"):
                v *= sc["length"]
            elif key.startswith("tau"):
                v *= sc["time"]
            kw[key] = v
        try:
            return KinematicsSettings("explicit", explicit=CollisionKinematics(**kw))
        except DomainError as exc:
            raise ConfigurationError(f"kinematics.explicit: {exc}") from None

    t = _section(s["trajectory"], "kinematics.trajectory", _TRAJ_KEYS)
    for key in ("collision_energy", "reduced_mass", "ground", "intermediate", "final"):
        if key not in t:
            raise ConfigurationError(f"kinematics.trajectory.{key} is required")
    try:
        pots = {k: potential_from_dict(_section(t[k], f"kinematics.trajectory.{k}",
                                                ("form", "C", "n", "depth", "alpha", "r_eq", "file", "domain")),
                                       sc["length"], sc["energy"], base_dir)
                for k in ("ground", "intermediate", "final")}
        det = t.get("photon_detunings", [0.0, 0.0])
        if not isinstance(det, list) or len(det) != 2:
            raise ConfigurationError("kinematics.trajectory.photon_detunings must be a pair")
        inputs = TrajectoryInputs(
            collision_energy=parse_number(t["collision_energy"], "collision_energy") * sc["energy"],
            impact_parameter=parse_number(t.get("impact_parameter", 0.0), "impact_parameter") * sc["length"],
            reduced_mass=parse_number(t["reduced_mass"], "reduced_mass") * sc["mass"],
            photon_detunings=tuple(parse_number(d, "photon_detunings") * sc["energy"] for d in det),
            **pots,
        )
    except DomainError as exc:
        raise ConfigurationError(f"kinematics.trajectory: {exc}") from None
    ref = t.get("reference", [1.0, 1.0])
    if not isinstance(ref, list) or len(ref) != 2:
        raise ConfigurationError("kinematics.trajectory.reference must be [radial speed, slope]")
    j0 = parse_number(t.get("j0", 0), "j0")
    if j0 < 0:
        raise ConfigurationError("kinematics.trajectory.j0 must be non-negative")
    return KinematicsSettings(
        "trajectory", trajectory=inputs,
        case=_case(t.get("case", "all"), "kinematics.trajectory.case"),
        R1_index=_optional_index(t.get("R1_index"), "R1_index"),
        R2_index=_optional_index(t.get("R2_index"), "R2_index"),
        j0=j0, reference=tuple(parse_number(r, "reference") for r in ref),
    )


def _kinematics_echo(kin: KinematicsSettings) -> dict:
    if kin.source == "recoil":
        return {"source": "recoil"}
    if kin.source == "explicit":
        return {"source": "explicit", **kin.explicit.digest()}
    t = kin.trajectory
    return {
        "source": "trajectory",
        "collision_energy": t.collision_energy, "impact_parameter": t.impact_parameter,
        "reduced_mass": t.reduced_mass, "photon_detunings": list(t.photon_detunings),
        "potentials": {k: _potential_echo(getattr(t, k)) for k in ("ground", "intermediate", "final")},
        "case": kin.case.value, "R1_index": kin.R1_index, "R2_index": kin.R2_index,
        "j0": kin.j0, "reference": list(kin.reference),
    }


def _potential_echo(pot) -> dict:
    if isinstance(pot, Tabulated):
        return {"form": "tabulated", "points": len(pot.r), "domain": list(pot.domain)}
    if isinstance(pot, InversePower):
        return {"form": "inverse_power", "C": pot.coefficient, "n": pot.power, "domain": list(pot.domain)}
    return {"form": "morse", "depth": pot.depth, "alpha": pot.alpha, "r_eq": pot.r_eq, "domain": list(pot.domain)}


def _parse_output(data) -> OutputSettings:
    s = _section(data, "output", ("format", "path"))
    fmt = s.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigurationError(f"output.format {fmt!r} unknown; use csv or json")
    path = s.get("path")
    return OutputSettings(fmt, None if path is None else str(path))

