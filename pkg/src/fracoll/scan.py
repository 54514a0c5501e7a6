"""Parameter scans over the light and delay settings and deterministic table output.

Column order (schema version 1):

    <swept parameters in the order phi, kappa, g, delay>,
    sigma0[<channel>] for each channel, fraction[<channel>] for each channel,
    classicality_witness            (OPO light only)

The witness is coth^2(kappa) g evaluated at the largest g over the active
trajectory segments.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channels import CollisionKinematics, recoil_kinematics
from .config import ScanConfig
from .cross_section import UNITS_NOTE, normalized_fractions, total_cross_section
from .errors import DomainError, FracollError
from .light import (
    ClassicalLight,
    ConstantEnvelope,
    OpoLightModel,
    WeakLimitLight,
    classicality_witness,
)
from .trajectory import resolve_kinematics

__all__ = ["SCHEMA_VERSION", "ResultTable", "ScanPointError", "resolve_config_kinematics",
           "light_at", "run_scan", "render", "emit", "read_csv", "format_value"]

SCHEMA_VERSION = 1


def _version() -> str:
    from . import __version__
    return __version__


@dataclass(frozen=True)
class ResultTable:
    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError("row length does not match the column schema")

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows])


class ScanPointError(DomainError):
    """Numerical failure at a particular grid point."""

    def __init__(self, point: dict, cause: Exception):
        self.point = point
        self.cause = cause
        where = ", ".join(f"{k}={v!r}" for k, v in point.items())
        super().__init__(f"at grid point ({where}): {cause}")


def resolve_config_kinematics(config: ScanConfig) -> tuple[CollisionKinematics, dict | None]:
    k = config.kinematics
    if k.source == "recoil":
        return recoil_kinematics(), None
    if k.source == "explicit":
        return k.explicit, None
    return resolve_kinematics(k.trajectory, k.case, k.R1_index, k.R2_index, k.j0, k.reference)


def light_at(config: ScanConfig, point: dict):
    """Light source for the parameter values of one grid point."""
    ls = config.light
    phi = point.get("phi", ls.phi)
    envelope = ConstantEnvelope(point["g"]) if "g" in point else ls.envelope
    if ls.mode == "classical":
        return ClassicalLight()
    if ls.mode == "weak_limit":
        return WeakLimitLight(phi, envelope)
    return OpoLightModel(point.get("kappa", ls.kappa), phi, envelope)


def _evaluate(config: ScanConfig, kin: CollisionKinematics, point: dict) -> tuple[float, ...]:
    try:
        light = light_at(config, point)
        delay = point.get("delay", config.light.delay)
        results = [total_cross_section(ch, kin, light, delay) for ch in config.channels]
        fractions = normalized_fractions(results)
        row = [point[a.name] for a in config.axes] + [r.sigma0 for r in results]
        row += [fractions[ch.label] for ch in config.channels]
        if isinstance(light, OpoLightModel):
            taus = [abs(kin.duration(s) - delay) for s in kin.active_segments()]
            row.append(max(classicality_witness(light, t) for t in taus))
        if not all(np.isfinite(row)):
            raise DomainError("non-finite value in result row")
        return tuple(float(v) for v in row)
    except FracollError as exc:
        raise ScanPointError(point, exc) from exc


def _columns(config: ScanConfig) -> tuple[str, ...]:
    cols = [a.name for a in config.axes]
    cols += [f"sigma0[{c.label}]" for c in config.channels]
    cols += [f"fraction[{c.label}]" for c in config.channels]
    if config.light.mode == "opo":
        cols.append("classicality_witness")
    return tuple(cols)


def run_scan(config: ScanConfig, workers: int | None = None) -> ResultTable:
    """Evaluate every grid point; rows follow the grid order whatever the worker count."""
    kin, report = resolve_config_kinematics(config)
    names = [a.name for a in config.axes]
    points = [dict(zip(names, vals)) for vals in itertools.product(*(a.values for a in config.axes))]
    n = workers if workers is not None else config.workers
    if n <= 1:
        rows = [_evaluate(config, kin, p) for p in points]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            rows = list(pool.map(lambda p: _evaluate(config, kin, p), points))
    metadata = {
        "program": "fracoll",
        "version": _version(),
        "schema_version": SCHEMA_VERSION,
        "cross_section_units": UNITS_NOTE,
        "unit_system": config.units.describe(),
        "config": config.echo,
        "kinematics": kin.digest(),
    }
    if report is not None:
        metadata["trajectory"] = report
    return ResultTable(_columns(config), tuple(rows), metadata)


def format_value(v: float) -> str:
    return format(float(v), ".17g")


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj).__name__}")


def _dumps(obj, **kw) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, default=_json_default, **kw)


def render(table: ResultTable, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        for key in sorted(table.metadata):
            buf.write(f"# {key}: {_dumps(table.metadata[key])}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([format_value(v) for v in row])
        return buf.getvalue()
    if fmt == "json":
        doc = {"metadata": table.metadata, "columns": list(table.columns),
               "rows": [list(r) for r in table.rows]}
        return _dumps(doc, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}; use csv or json")


def emit(table: ResultTable, fmt: str = "csv", path=None) -> str:
    """Write the table to ``path`` (or return the text when ``path`` is None).

    CSV carries the metadata as leading '#' comment lines, then the header,
    then one line per row with 17 significant digits.
    """
    text = render(table, fmt)
    if path is not None:
        p = Path(path)
        try:
            p.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write {p}: {exc.strerror or exc}") from exc
    return text


def read_csv(path_or_text) -> tuple[dict, tuple[str, ...], list[tuple[float, ...]]]:
    """Parse emitted CSV back into (metadata, columns, rows)."""
    text = path_or_text
    if isinstance(path_or_text, Path) or (isinstance(path_or_text, str) and "\n" not in path_or_text):
        text = Path(path_or_text).read_text(encoding="utf-8")
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, val = line[2:].partition(": ")
            meta[key] = json.loads(val)
        else:
            body.append(line)
    reader = csv.reader(body)
    header = tuple(next(reader))
    rows = [tuple(float(v) for v in r) for r in reader]
    return meta, header, rows

