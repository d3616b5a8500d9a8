"""Command-line surface.

One subcommand per workflow: `cpw` and `transmon` are single-shot
calculators, `smatrix` synthesizes and re-extracts a notch response,
`match` runs the port-impedance study, `fieldsolve` solves a CPW
cross-section, `analyze` runs the full device report and `sweep` the
parametric tables.  Exit codes: 0 success, 1 invalid input, 2 numerical
failure.  All numbers print with 12 significant digits and no run ever
emits timestamps, so identical invocations give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys

import numpy as np

from . import cpw, device, fieldsolve, network, transmon
from .constants import PLANCK_H
from .device import _AREA, _CAP, _FREQ, _IND, _LENGTH, _round12
from .numerics import RealInterval
from .tables import SweepTable
from .transmon import CutoffError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERIC = 2

_SVG_W, _SVG_H = 800, 500
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 160, 20, 50
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b")


class _UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; here 2 means a
    # numerical failure, so route usage problems through exit code 1
    def error(self, message):
        raise _UsageError(message)


_QUANTITY_RE = re.compile(
    r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([^\s\d][^\s]*)?$")


def _quantity(units: dict[str, float], dimension: str):
    """argparse type: float with an optional unit suffix ("5.806um")."""

    def parse(text: str) -> float:
        m = _QUANTITY_RE.match(text.strip())
        if not m:
            raise _UsageError(f"cannot parse {dimension} value {text!r}")
        value = float(m.group(1))
        unit = m.group(2)
        if unit:
            if unit not in units:
                raise _UsageError(f"{unit!r} is not a {dimension} unit")
            value *= units[unit]
        return value

    parse.__name__ = dimension
    return parse


_length = _quantity(_LENGTH, "length")
_capacitance = _quantity(_CAP, "capacitance")
_inductance = _quantity(_IND, "inductance")
_frequency = _quantity(_FREQ, "frequency")
_area = _quantity(_AREA, "area")


def _band(text: str) -> RealInterval:
    parts = text.split(":")
    if len(parts) != 2:
        raise _UsageError(f"band must be lo:hi, got {text!r}")
    return RealInterval(_frequency(parts[0]), _frequency(parts[1]))


def _parse_grid(text: str, value):
    """Sweep grid: "start:stop:N", "start:stop:logN" or "a,b,c".

    A log grid starting at 0 keeps the zero point and log-spaces the
    rest over the four decades below the stop, which is the useful
    range for loss tangents.
    """
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise _UsageError(f"grid must be start:stop:count, got {text!r}")
        start, stop = value(parts[0]), value(parts[1])
        count = parts[2].strip()
        is_log = count.startswith("log")
        if is_log:
            count = count[3:]
        try:
            n = int(count)
        except ValueError as exc:
            raise _UsageError(f"bad grid count {parts[2]!r}") from exc
        if n < 2:
            raise _UsageError("grid needs at least 2 points")
        if not is_log:
            return [float(x) for x in np.linspace(start, stop, n)]
        if start < 0.0 or stop <= 0.0 or start >= stop:
            raise _UsageError("log grid needs 0 <= start < stop, stop > 0")
        if start == 0.0:
            tail = np.geomspace(1e-4 * stop, stop, n - 1)
            return [0.0] + [float(x) for x in tail]
        return [float(x) for x in np.geomspace(start, stop, n)]
    points = [value(tok) for tok in text.split(",") if tok.strip()]
    if not points:
        raise _UsageError("empty grid")
    return points


# output plumbing


def _jsonable(obj):
    if isinstance(obj, float):
        return _round12(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _flat_lines(prefix: str, obj, out: list[str]):
    if isinstance(obj, dict):
        if set(obj) == {"value", "by"}:  # provenance pair: show the value
            _flat_lines(prefix, obj["value"], out)
            return
        for k, v in obj.items():
            _flat_lines(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _flat_lines(f"{prefix}[{i}]", v, out)
    elif isinstance(obj, float):
        out.append(f"{prefix} = {obj:.12g}")
    else:
        out.append(f"{prefix} = {obj}")


def _emit(payload: dict, as_json: bool):
    if as_json:
        print(json.dumps(_jsonable(payload), indent=2))
    else:
        lines: list[str] = []
        _flat_lines("", payload, lines)
        print("\n".join(lines))


def _write_text(path: str, text: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# SVG plotting


def _axis_ticks(lo: float, hi: float, log: bool) -> list[float]:
    if log:
        decades = range(math.ceil(math.log10(lo) - 1e-9),
                        math.floor(math.log10(hi) + 1e-9) + 1)
        ticks = [10.0 ** d for d in decades]
        if len(ticks) > 8:  # subsample, keep ends
            step = math.ceil(len(ticks) / 8)
            ticks = ticks[::step] + ([ticks[-1]] if (len(ticks) - 1) % step
                                     else [])
        if ticks:
            return ticks
    return [float(x) for x in np.linspace(lo, hi, 5)]


def emit_plot(table: SweepTable, x_name: str, y_names: list[str],
              path: str, logx: bool = False, logy: bool = False):
    """Deterministic 800x500 SVG line chart of table columns.

    The x column may be the sweep parameter or any metric column; every
    series shares the y axis.  Log axes demand positive data.  Needs at
    least two rows (a single point draws no line) and raises ValueError
    otherwise.
    """
    series = dict(table.columns)
    series[table.param_name] = list(table.param_values)
    for name in [x_name, *y_names]:
        if name not in series:
            raise ValueError(f"unknown column {name!r}")
    if not y_names:
        raise ValueError("no y columns to plot")
    xs = [float(v) for v in series[x_name]]
    if len(xs) < 2:
        raise ValueError("need at least two rows to draw a line")
    ys = {name: [float(v) for v in series[name]] for name in y_names}

    def to_axis(values: list[float], log: bool, label: str) -> list[float]:
        if not log:
            return values
        if min(values) <= 0.0:
            raise ValueError(f"log axis needs positive {label} values")
        return [math.log10(v) for v in values]

    ax = to_axis(xs, logx, "x")
    ay = {n: to_axis(v, logy, "y") for n, v in ys.items()}
    x_lo, x_hi = min(ax), max(ax)
    all_y = [v for col in ay.values() for v in col]
    y_lo, y_hi = min(all_y), max(all_y)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5

    def px(v: float) -> float:
        return _MARGIN_L + (v - x_lo) / (x_hi - x_lo) * (
            _SVG_W - _MARGIN_L - _MARGIN_R)

    def py(v: float) -> float:
        return _SVG_H - _MARGIN_B - (v - y_lo) / (y_hi - y_lo) * (
            _SVG_H - _MARGIN_T - _MARGIN_B)

    left, right = _MARGIN_L, _SVG_W - _MARGIN_R
    top, bottom = _MARGIN_T, _SVG_H - _MARGIN_B
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" '
        f'height="{_SVG_H}" viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect x="0" y="0" width="{_SVG_W}" height="{_SVG_H}" '
        'fill="white"/>',
        '<g font-family="monospace" font-size="12" fill="black">',
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" '
        'stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" '
        'stroke="black"/>',
    ]
    for t in _axis_ticks(10.0 ** x_lo if logx else x_lo,
                         10.0 ** x_hi if logx else x_hi, logx):
        v = math.log10(t) if logx else t
        if not x_lo - 1e-9 <= v <= x_hi + 1e-9:
            continue
        x = px(v)
        parts.append(f'<line x1="{x:.2f}" y1="{bottom}" x2="{x:.2f}" '
                     f'y2="{bottom + 5}" stroke="black"/>')
        parts.append(f'<text x="{x:.2f}" y="{bottom + 18}" '
                     f'text-anchor="middle">{t:.6g}</text>')
    for t in _axis_ticks(10.0 ** y_lo if logy else y_lo,
                         10.0 ** y_hi if logy else y_hi, logy):
        v = math.log10(t) if logy else t
        if not y_lo - 1e-9 <= v <= y_hi + 1e-9:
            continue
        y = py(v)
        parts.append(f'<line x1="{left - 5}" y1="{y:.2f}" x2="{left}" '
                     f'y2="{y:.2f}" stroke="black"/>')
        parts.append(f'<text x="{left - 8}" y="{y + 4:.2f}" '
                     f'text-anchor="end">{t:.6g}</text>')
    parts.append(f'<text x="{(left + right) / 2:.2f}" y="{_SVG_H - 12}" '
                 f'text-anchor="middle">{x_name}</text>')

    for i, name in enumerate(y_names):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}"
                       for a, b in zip(ax, ay[name]))
        parts.append(f'<polyline points="{pts}" fill="none" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        # label both endpoints with the data values
        for j in (0, -1):
            x, y = px(ax[j]), py(ay[name][j])
            anchor = "start" if j == 0 else "end"
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2.5" '
                         f'fill="{color}"/>')
            parts.append(f'<text x="{x:.2f}" y="{y - 6:.2f}" '
                         f'text-anchor="{anchor}" fill="{color}">'
                         f'{ys[name][j]:.6g}</text>')
        parts.append(f'<text x="{right + 8}" y="{top + 14 * (i + 1)}" '
                     f'fill="{color}">{name}</text>')
    parts.append("</g>")
    parts.append("</svg>")
    _write_text(path, "\n".join(parts) + "\n")


# subcommands


def _cmd_cpw(args) -> dict:
    eps_eff = cpw.effective_permittivity(args.eps_sub, args.eps_sup)
    if (args.s is None) == (args.z0 is None):
        raise _UsageError("give exactly one of --s (analyze) or "
                          "--z0 (synthesize the gap)")
    if args.s is not None:
        gap = args.s
    else:
        gap = cpw.solve_gap_for_impedance(args.w, eps_eff, args.z0)
    return {
        "trace_width_m": args.w,
        "gap_m": gap,
        "eps_eff": eps_eff,
        "z0_ohm": cpw.characteristic_impedance(args.w, gap, eps_eff),
        "phase_velocity_m_per_s": cpw.phase_velocity(eps_eff),
    }


def _cmd_transmon(args) -> dict:
    pars = transmon.TransmonParams(c_junction=args.cj, c_shunt=args.cs,
                                   l_junction=args.lj, c_eff=args.c_eff)
    ej = transmon.squid_josephson_energy(
        transmon.josephson_energy(pars.l_junction), args.flux)
    ec = transmon.charging_energy(pars.c_total)
    out = {
        "c_total_f": pars.c_total,
        "ec_hz": ec / PLANCK_H,
        "ej_hz": ej / PLANCK_H,
        "ej_over_ec": ej / ec,
        "frequency_hz": transmon.transmon_frequency(ec, ej),
        "frequency_cpb_hz": transmon.cpb_frequency(ec, ej, ng=args.ng,
                                                   cutoff=args.cutoff),
        "anharmonicity_hz": transmon.anharmonicity(ec),
        "anharmonicity_cpb_hz": transmon.cpb_anharmonicity(
            ec, ej, ng=args.ng, cutoff=args.cutoff),
    }
    if args.c_eff is not None:
        ec_eff = transmon.charging_energy(args.c_eff)
        out["frequency_c_eff_hz"] = transmon.transmon_frequency(ec_eff, ej)
    return out


def _cmd_smatrix(args) -> dict:
    res = network.NotchResonator(f_r=args.fr, q_loaded=args.ql,
                                 q_coupling=args.qc, chi=args.chi)
    span = args.span if args.span is not None else 20.0 * args.fr / args.ql
    band = RealInterval(args.fr - 0.5 * span, args.fr + 0.5 * span)
    grid = network.frequency_grid(band, args.points)
    resp = network.notch_s21(res, grid, qubit_state=args.state,
                             z_ref=args.z_ref)
    if args.out:
        _write_text(args.out, resp.to_csv())
    if args.plot:
        chart = SweepTable(param_name="freq_hz")
        for f, db in zip(resp.frequencies, resp.magnitude_db("s21")):
            chart.add_row(float(f), s21_db=float(db))
        emit_plot(chart, "freq_hz", ["s21_db"], args.plot)
    out = {
        "f_r_hz": res.f_r,
        "dressed_f_hz": res.dressed_frequency(args.state),
        "q_loaded": res.q_loaded,
        "q_coupling": res.q_coupling,
        "points": args.points,
        "min_s21_db": float(np.min(resp.magnitude_db("s21"))),
    }
    if not args.no_extract:
        f_fit, q_fit, bw = network.extract_q_fwhm(resp)
        out["extracted_f_hz"] = f_fit
        out["extracted_q"] = q_fit
        out["bandwidth_hz"] = bw
    return out


def _cmd_match(args) -> dict:
    if args.zstep <= 0.0:
        raise _UsageError("--zstep must be positive")
    n = int(round((args.zmax - args.zmin) / args.zstep)) + 1
    if n < 2:
        raise _UsageError("impedance range needs at least 2 points")
    table = SweepTable(param_name="z_port_ohm")
    for z in np.linspace(args.zmin, args.zmax, n):
        worst = network.worst_case_reflection(
            args.line_z0, float(z), args.band, args.line_length,
            args.eps_eff, args.points)
        table.add_row(float(z), worst_s11_db=worst)
    best = int(np.argmin(table.columns["worst_s11_db"]))
    if args.out:
        _write_text(args.out, table.to_csv())
    if args.plot:
        emit_plot(table, "z_port_ohm", ["worst_s11_db"], args.plot)
    return {
        "line_z0_ohm": args.line_z0,
        "band_lo_hz": args.band.lo,
        "band_hi_hz": args.band.hi,
        "grid_points": n,
        "best_z_port_ohm": table.param_values[best],
        "best_worst_s11_db": table.columns["worst_s11_db"][best],
    }


def _cmd_fieldsolve(args) -> dict:
    geometry = cpw.CpwGeometry(trace_width=args.w, gap=args.s,
                               eps_substrate=args.eps_sub,
                               eps_superstrate=args.eps_sup)
    section = fieldsolve.cpw_cross_section(
        geometry, cell=args.cell, box_factor=args.box_factor,
        interlayer_thickness=args.interlayer)
    sol = fieldsolve.solve_potential(section, tol=args.tol,
                                     max_sweeps=args.max_sweeps)
    if args.dump_potential:
        xs, ys = section.cell_centers()
        rows = ["x_m,y_m,v"]
        for j, y in enumerate(ys):
            for i, x in enumerate(xs):
                rows.append(f"{x:.12g},{y:.12g},{sol.potential[i, j]:.12g}")
        _write_text(args.dump_potential, "\n".join(rows) + "\n")
    c = fieldsolve.capacitance_per_length(sol)
    participation = fieldsolve.energy_participation(sol)
    eps_eff, z0 = fieldsolve.extract_eps_eff_and_z0(
        section, tol=args.tol, max_sweeps=args.max_sweeps, solution=sol)
    return {
        "nx": section.nx,
        "ny": section.ny,
        "cell_m": section.hx,
        "iterations": sol.iterations,
        "c_per_m": c,
        "c_vacuum_per_m": c / eps_eff,
        "eps_eff": eps_eff,
        "z0_ohm": z0,
        "participation": participation,
    }


def _resolve_config(path: str) -> device.DeviceSpec:
    if os.path.isfile(path):
        return device.load_config(path)
    if os.path.basename(path) in ("paper-default", "paper-default.cfg"):
        return device.paper_default()
    raise _UsageError(f"config file not found: {path}")


def _cmd_analyze(args) -> None:
    spec = _resolve_config(args.config)
    report = device.analyze(spec)
    text = report.to_json()
    if args.out:
        _write_text(args.out, text)
    if args.json:
        sys.stdout.write(text)
    else:
        lines: list[str] = []
        _flat_lines("", report.data, lines)
        print("\n".join(lines))


def _cmd_sweep(args) -> None:
    spec = _resolve_config(args.config)
    value = _length if args.param == "interlayer_thickness" else float
    grid = _parse_grid(args.grid, value)
    table = device.sweep(spec, args.param, grid)
    csv_text = table.to_csv()
    if args.out:
        _write_text(args.out, csv_text)
    if args.plot:
        y_names = (args.y.split(",") if args.y
                   else [table.header()[1]])
        x_name = args.x if args.x else table.param_name
        emit_plot(table, x_name, y_names, args.plot,
                  logx=args.logx, logy=args.logy)
    if args.json:
        payload = {
            "param_name": table.param_name,
            "columns": table.header(),
            "rows": [[pv, *(table.columns[c][i]
                            for c in table.columns)]
                     for i, pv in enumerate(table.param_values)],
        }
        _emit(payload, as_json=True)
    elif not args.out:
        sys.stdout.write(csv_text)


def build_parser() -> _Parser:
    parser = _Parser(prog="flipkit",
                     description="flip-chip device design calculators")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cpw", help="CPW impedance analysis / gap synthesis")
    p.add_argument("--w", type=_length, required=True,
                   help="trace width, e.g. 10um")
    p.add_argument("--s", type=_length, help="gap; omit when giving --z0")
    p.add_argument("--z0", type=float,
                   help="target impedance (ohm) to synthesize the gap for")
    p.add_argument("--eps-sub", type=float, required=True)
    p.add_argument("--eps-sup", type=float, default=1.0)
    p.set_defaults(func=_cmd_cpw)

    p = sub.add_parser("transmon", help="transmon energies and levels")
    p.add_argument("--cj", type=_capacitance, required=True,
                   help="junction capacitance, e.g. 8fF")
    p.add_argument("--cs", type=_capacitance, required=True,
                   help="shunt capacitance")
    p.add_argument("--lj", type=_inductance, required=True,
                   help="junction inductance, e.g. 8.75nH")
    p.add_argument("--c-eff", type=_capacitance, default=None,
                   help="report an extra frequency at this capacitance")
    p.add_argument("--flux", type=float, default=0.0,
                   help="SQUID flux bias in units of Phi0")
    p.add_argument("--ng", type=float, default=0.0)
    p.add_argument("--cutoff", type=int, default=transmon.DEFAULT_CUTOFF)
    p.set_defaults(func=_cmd_transmon)

    p = sub.add_parser("smatrix", help="notch-resonator S21 and Q recovery")
    p.add_argument("--fr", type=_frequency, required=True,
                   help="resonance frequency, e.g. 7.1GHz")
    p.add_argument("--ql", type=float, required=True, help="loaded Q")
    p.add_argument("--qc", type=float, required=True, help="coupling Q")
    p.add_argument("--chi", type=_frequency, default=0.0,
                   help="dispersive shift for dressed states")
    p.add_argument("--state", type=int, choices=(0, 1), default=0)
    p.add_argument("--span", type=_frequency, default=None,
                   help="grid span (default 20 linewidths)")
    p.add_argument("--points", type=int,
                   default=network.DEFAULT_GRID_POINTS)
    p.add_argument("--z-ref", type=float, default=50.0)
    p.add_argument("--no-extract", action="store_true",
                   help="skip the FWHM Q extraction")
    p.add_argument("--out", help="write the trace as CSV")
    p.add_argument("--plot", help="write |S21| in dB as SVG")
    p.set_defaults(func=_cmd_smatrix)

    p = sub.add_parser("match", help="worst-case reflection vs port Z")
    p.add_argument("--line-z0", type=float, required=True,
                   help="impedance of the line under test (ohm)")
    p.add_argument("--band", type=_band, required=True,
                   help="frequency band lo:hi, e.g. 4GHz:8GHz")
    p.add_argument("--line-length", type=_length, default=2e-3)
    p.add_argument("--eps-eff", type=float, default=6.45)
    p.add_argument("--zmin", type=float, default=40.0)
    p.add_argument("--zmax", type=float, default=60.0)
    p.add_argument("--zstep", type=float, default=0.1)
    p.add_argument("--points", type=int, default=201,
                   help="frequency samples per impedance point")
    p.add_argument("--out", help="write the study as CSV")
    p.add_argument("--plot", help="write the study as SVG")
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("fieldsolve", help="solve a CPW cross-section")
    p.add_argument("--w", type=_length, required=True)
    p.add_argument("--s", type=_length, required=True)
    p.add_argument("--eps-sub", type=float, required=True)
    p.add_argument("--eps-sup", type=float, default=1.0)
    p.add_argument("--cell", type=_length, default=0.5e-6)
    p.add_argument("--box-factor", type=float, default=10.0)
    p.add_argument("--interlayer", type=_length, default=None,
                   help="facing-chip ground height above the trace")
    p.add_argument("--tol", type=float, default=fieldsolve.DEFAULT_TOL)
    p.add_argument("--max-sweeps", type=int,
                   default=fieldsolve.DEFAULT_MAX_SWEEPS)
    p.add_argument("--dump-potential",
                   help="write the potential grid as x,y,V CSV rows")
    p.set_defaults(func=_cmd_fieldsolve)

    p = sub.add_parser("analyze", help="full device report from a config")
    p.add_argument("--config", default="paper-default",
                   help="config path or the packaged preset name")
    p.add_argument("--out", help="also write the JSON report to a file")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("sweep", help="parametric sweep to CSV/SVG")
    p.add_argument("--config", default="paper-default")
    p.add_argument("--param", required=True,
                   choices=device.SWEEP_PARAMETERS)
    p.add_argument("--grid", required=True,
                   help="start:stop:N, start:stop:logN or v1,v2,...")
    p.add_argument("--out", help="write the table as CSV")
    p.add_argument("--plot", help="write an SVG chart")
    p.add_argument("--x", help="x column for the plot (default: parameter)")
    p.add_argument("--y", help="comma-separated y columns for the plot")
    p.add_argument("--logx", action="store_true")
    p.add_argument("--logy", action="store_true")
    p.set_defaults(func=_cmd_sweep)

    for sp in sub.choices.values():
        sp.add_argument("--json", action="store_true",
                        help="machine-readable output")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"flipkit: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        payload = args.func(args)
    except (CutoffError, fieldsolve.ConvergenceError,
            network.ExtractionError) as exc:
        print(f"flipkit: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, KeyError, OSError) as exc:
        print(f"flipkit: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if payload is not None:
        _emit(payload, as_json=args.json)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
