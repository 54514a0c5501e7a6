"""Command-line entry point: ``fracoll scan | kinematics | oracle``.

Exit status: 0 success, 2 configuration error, 3 numerical domain error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .channels import parse_channel
from .config import load_config, parse_number
from .cross_section import recoil_oracle
from .errors import ConfigurationError, DomainError
from .scan import emit, format_value, resolve_config_kinematics, run_scan

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN = 0, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracoll", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("scan", help="cross sections and branching fractions over a parameter grid")
    s.add_argument("--config", required=True)
    s.add_argument("--out", help="output file (default: config output.path, else stdout)")
    s.add_argument("--format", choices=("csv", "json"))
    s.add_argument("--workers", type=int, help="parallel evaluation threads")

    k = sub.add_parser("kinematics", help="trajectory report for the configured kinematics")
    k.add_argument("--config", required=True)
    k.add_argument("--out")

    o = sub.add_parser("oracle", help="closed-form recoil-limit cross section")
    o.add_argument("--channel", required=True)
    o.add_argument("--phi", required=True, help='radians; "pi", "pi/2" accepted')
    o.add_argument("--coth2g", required=True, help="coth(kappa)^2 g(tau)")
    return p


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _scan(args) -> int:
    config = load_config(args.config)
    if args.workers is not None and args.workers < 1:
        raise ConfigurationError("--workers must be >= 1")
    table = run_scan(config, args.workers)
    fmt = args.format or config.output.format
    path = args.out or config.output.path
    text = emit(table, fmt, path)
    if path is None:
        sys.stdout.write(text)
    return EXIT_OK


def _kinematics(args) -> int:
    config = load_config(args.config)
    kin, report = resolve_config_kinematics(config)
    doc = {"units": config.units.describe(), "kinematics": kin.digest()}
    if report is not None:
        doc["trajectory"] = report
    _write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n", args.out)
    return EXIT_OK


def _oracle(args) -> int:
    channel = parse_channel(args.channel)
    value = recoil_oracle(channel, parse_number(args.phi, "--phi"), parse_number(args.coth2g, "--coth2g"))
    sys.stdout.write(format_value(value) + "\n")
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    handler = {"scan": _scan, "kinematics": _kinematics, "oracle": _oracle}[args.command]
    try:
        return handler(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
