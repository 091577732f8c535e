"""Command-line front end.

Subcommands write CSV (``#``-prefixed metadata lines, 12 significant digits)
or JSON.  Exit codes: 0 ok, 2 config error, 3 invalid sweep/energies,
4 oracle disagreement above tolerance, 5 oracle run invalid.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bound_states import find_single_crw_bound_states, find_total_system_bound_states
from .lattice import BoundaryLeak, oracle_coefficients
from .model import BandEdgeIncident, SystemConfig, channel_kind
from .scattering import scatter_bright, scatter_from_a

log = logging.getLogger("crwrouter")

EXIT_OK, EXIT_CONFIG, EXIT_SWEEP, EXIT_TOLERANCE, EXIT_ORACLE = 0, 2, 3, 4, 5

CONFIG_KEYS = ("xi_a", "xi_b", "omega_a", "omega_b", "omega_e", "omega_s", "rabi", "g_a", "g_b")
QUANTITIES = ("T_a", "R_a", "transfer_total", "flux_residual", "T_B")
DEFAULT_QUANTITIES = ("T_a", "R_a", "transfer_total", "flux_residual")
ORACLE_TOLERANCE = 2e-2
EDGE_MARGIN = 0.05


class UsageError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def load_config(path) -> SystemConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}", EXIT_CONFIG)
    if not isinstance(raw, dict):
        raise UsageError("config must be a flat JSON object", EXIT_CONFIG)
    missing = [k for k in CONFIG_KEYS if k not in raw]
    unknown = [k for k in raw if k not in CONFIG_KEYS]
    if missing or unknown:
        raise UsageError(f"config keys: missing {missing}, unknown {unknown}", EXIT_CONFIG)
    if not all(isinstance(raw[k], (int, float)) and not isinstance(raw[k], bool) for k in CONFIG_KEYS):
        raise UsageError("config values must all be numbers", EXIT_CONFIG)
    try:
        return SystemConfig.from_flat(raw)
    except ValueError as exc:
        raise UsageError(f"invalid config: {exc}", EXIT_CONFIG)


def _fmt(x) -> str:
    return "" if x is None else f"{x:.12g}"


def _header(config: SystemConfig, command: str) -> list[str]:
    return [
        f"# crwrouter {__version__} {command}",
        "# config: " + json.dumps(config.to_flat(), sort_keys=True),
    ]


def _write(out: str | None, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def energy_grid(e_min: float, e_max: float, points: int) -> np.ndarray:
    if not (math.isfinite(e_min) and math.isfinite(e_max)) or e_min >= e_max:
        raise UsageError(f"need emin < emax, got {e_min}, {e_max}", EXIT_SWEEP)
    if points < 2:
        raise UsageError(f"need at least 2 points, got {points}", EXIT_SWEEP)
    return np.linspace(e_min, e_max, points)


def _parse_quantities(text: str) -> list[str]:
    qs = [q.strip() for q in text.split(",") if q.strip()]
    if not qs:
        raise UsageError("empty quantity set", EXIT_SWEEP)
    bad = [q for q in qs if q not in QUANTITIES]
    if bad:
        raise UsageError(f"unknown quantities {bad}; choose from {QUANTITIES}", EXIT_SWEEP)
    return [q for q in QUANTITIES if q in qs]


def spectrum_rows(config: SystemConfig, energies, quantities) -> list[str]:
    """CSV body for a sweep; points without an incident wave get empty fields."""
    lines = [",".join(["E", *quantities])]
    blank = "," * len(quantities)
    for e in energies:
        e = float(e)
        try:
            res = scatter_from_a(config, e)
        except BandEdgeIncident:
            lines.append(f"# band edge at E={_fmt(e)}")
            lines.append(_fmt(e) + blank)
            continue
        except ValueError:
            lines.append(f"# outside band a at E={_fmt(e)}")
            lines.append(_fmt(e) + blank)
            continue
        vals = {
            "T_a": res.T_a,
            "R_a": res.R_a,
            "transfer_total": res.transfer_total,
            "flux_residual": res.flux_residual,
        }
        if "T_B" in quantities:
            vals["T_B"] = abs(scatter_bright(config, e)[0]) ** 2
        lines.append(",".join([_fmt(e)] + [_fmt(vals[q]) for q in quantities]))
    return lines


def cmd_spectrum(args) -> int:
    config = load_config(args.config)
    quantities = _parse_quantities(args.quantities)
    grid = energy_grid(args.emin, args.emax, args.points)
    lines = _header(config, "spectrum")
    if "T_B" in quantities and not config.identical_crws():
        lines.append("# T_B omitted: waveguides are not identical")
        quantities = [q for q in quantities if q != "T_B"]
    _write(args.out, lines + spectrum_rows(config, grid, quantities))
    return EXIT_OK


def cmd_bright_dark(args) -> int:
    config = load_config(args.config)
    if not config.identical_crws():
        raise UsageError("bright/dark analysis needs identical waveguides", EXIT_CONFIG)
    grid = energy_grid(args.emin, args.emax, args.points)
    lines = _header(config, "bright-dark") + ["E,T_B,R_B"]
    for e in grid:
        e = float(e)
        if not channel_kind(config.crw_a, e).is_open:
            lines.append(f"# no open channel at E={_fmt(e)}")
            lines.append(_fmt(e) + ",,")
            continue
        t, r = scatter_bright(config, e)
        lines.append(f"{_fmt(e)},{_fmt(abs(t) ** 2)},{_fmt(abs(r) ** 2)}")
    _write(args.out, lines)
    return EXIT_OK


def _parse_rabi_grid(text: str) -> np.ndarray:
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise UsageError(f"--rabi-grid wants MIN:MAX:N, got {text!r}", EXIT_SWEEP)
    if lo < 0 or hi < lo or n < 1 or (n > 1 and hi == lo):
        raise UsageError(f"invalid rabi grid {text!r}", EXIT_SWEEP)
    return np.linspace(lo, hi, n)


def bound_state_records(config: SystemConfig) -> list[dict]:
    states = find_single_crw_bound_states(config) + find_total_system_bound_states(config)
    return [s.to_dict() for s in states]


def cmd_bound_states(args) -> int:
    config = load_config(args.config)
    if args.rabi_grid:
        records = []
        for rabi in _parse_rabi_grid(args.rabi_grid):
            for rec in bound_state_records(config.with_(rabi=float(rabi))):
                records.append({"rabi": float(rabi), **rec})
    else:
        records = bound_state_records(config)
    text = json.dumps(records, indent=2)
    _write(args.out, [text])
    return EXIT_OK


def _parse_energies(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse energies {text!r}", EXIT_SWEEP)


def cmd_oracle_compare(args) -> int:
    config = load_config(args.config)
    energies = _parse_energies(args.energies)
    if not energies:
        raise UsageError("no energies given", EXIT_SWEEP)
    lo, hi = config.crw_a.band
    margin = EDGE_MARGIN * config.crw_a.xi
    for e in energies:
        if not lo + margin <= e <= hi - margin:
            raise UsageError(f"E={e} must be inside band a at least {margin} from its edges", EXIT_SWEEP)

    lines = _header(config, "oracle-compare")
    lines.append(f"# lattice_size={args.lattice_size} packet_width={args.packet_width}")
    lines.append("E,T_a_analytic,T_a_oracle,delta_T_a,transfer_analytic,transfer_oracle,delta_transfer")
    worst = 0.0
    for e in energies:
        res = scatter_from_a(config, e)
        try:
            orc = oracle_coefficients(config, e, width_sites=args.packet_width, M=args.lattice_size)
        except (BoundaryLeak, ValueError) as exc:
            log.error("oracle run invalid at E=%s: %s", e, exc)
            return EXIT_ORACLE
        d_t = abs(orc.T_a - res.T_a)
        d_x = abs(orc.transfer - res.transfer_total)
        worst = max(worst, d_t, d_x)
        lines.append(",".join(_fmt(x) for x in (e, res.T_a, orc.T_a, d_t, res.transfer_total, orc.transfer, d_x)))
    _write(args.out, lines)
    if worst >= ORACLE_TOLERANCE:
        log.error("max oracle deviation %.3g exceeds %.3g", worst, ORACLE_TOLERANCE)
        return EXIT_TOLERANCE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crwrouter", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="flat JSON parameter file")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    def sweep(p):
        p.add_argument("--emin", type=float, required=True)
        p.add_argument("--emax", type=float, required=True)
        p.add_argument("--points", type=int, default=801)

    p = sub.add_parser("spectrum", help="T_a, R_a, transfer and flux residual versus energy")
    common(p)
    sweep(p)
    p.add_argument("--quantities", default=",".join(DEFAULT_QUANTITIES), help=f"comma list from {QUANTITIES}")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bright-dark", help="bright-channel T_B and R_B versus energy")
    common(p)
    sweep(p)
    p.set_defaults(func=cmd_bright_dark)

    p = sub.add_parser("bound-states", help="bound states of waveguide b and of the whole system")
    common(p)
    p.add_argument("--rabi-grid", default=None, metavar="MIN:MAX:N")
    p.set_defaults(func=cmd_bound_states)

    p = sub.add_parser("oracle-compare", help="closed form versus lattice wavepacket runs")
    common(p)
    p.add_argument("--energies", required=True, help="comma-separated energies inside band a")
    p.add_argument("--lattice-size", type=int, default=1500, help="half-length M of each chain")
    p.add_argument("--packet-width", type=float, default=30.0, help="packet width in sites")
    p.set_defaults(func=cmd_oracle_compare)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        log.error("%s", exc)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
