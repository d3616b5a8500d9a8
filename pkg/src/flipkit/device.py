"""Device assembly: configs, the analysis report, and parametric sweeps.

A device is two chips facing each other across a vacuum gap.  Each chip
carries a CPW feed, a quarter-wave readout resonator and a transmon;
the stack adds the interlayer and the facing coupling pads.  Configs
are flat text, one `section.key = value [unit]` per line; the packaged
paper-default preset carries a complete working device.

analyze() folds every module into one report with per-field provenance
(each numeric is {"value", "by"} naming the operation or config key it
came from).  Reports serialize to JSON with stable key order and
12-significant-digit floats, so identical specs give identical bytes.
"""

from __future__ import annotations

import json
import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources

from . import coupling as coupling_mod
from . import cpw, fieldsolve, loss, network, transmon
from .numerics import RealInterval
from .tables import SweepTable

__all__ = [
    "ConfigError",
    "ChipSpec",
    "DeviceSpec",
    "DeviceReport",
    "parse_config",
    "load_config",
    "default_config_text",
    "paper_default",
    "analyze",
    "sweep",
    "sweep_worker_count",
]

SWEEP_PARAMETERS = ("interlayer_thickness", "loss_tangent")


class ConfigError(ValueError):
    """Invalid device configuration; carries every problem found."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


@dataclass(frozen=True)
class ChipSpec:
    """Everything one chip contributes to the model."""

    name: str
    geometry: cpw.CpwGeometry
    resonator: cpw.ResonatorSpec
    transmon: transmon.TransmonParams
    coupling_q: float
    substrate_thickness: float | None = None
    flux_bias: float = 0.0
    baseline_q: float | None = None
    g_qr: float | None = None

    def __post_init__(self):
        if self.coupling_q <= 0.0:
            raise ValueError("readout coupling Q must be positive")
        if self.baseline_q is not None and self.baseline_q <= 0.0:
            raise ValueError("qubit baseline Q must be positive")
        if self.g_qr is not None and self.g_qr <= 0.0:
            raise ValueError("readout g must be positive when given")


@dataclass(frozen=True)
class DeviceSpec:
    """Validated two-chip device."""

    bottom: ChipSpec
    top: ChipSpec
    interlayer_thickness: float
    interlayer_eps_r: float
    pad_overlap_area: float
    interlayer_tan_delta: float = 0.0
    coupling_f_bottom: float | None = None
    coupling_f_top: float | None = None
    participation: dict[str, float] | None = None
    fieldsolve_cell: float = 1e-6
    fieldsolve_box_factor: float = 10.0

    def __post_init__(self):
        if self.interlayer_thickness <= 0.0:
            raise ValueError("interlayer thickness must be positive")
        if self.interlayer_eps_r < 1.0:
            raise ValueError("interlayer eps_r must be >= 1")
        if self.interlayer_tan_delta < 0.0:
            raise ValueError("loss tangent must be >= 0")
        if self.pad_overlap_area <= 0.0:
            raise ValueError("pad overlap area must be positive")
        if self.participation is not None:
            total = 0.0
            for name, p in self.participation.items():
                if not 0.0 <= p <= 1.0:
                    raise ValueError(
                        f"participation of {name!r} outside [0, 1]")
                total += p
            if total > 1.0 + 1e-9:
                raise ValueError("participations sum past 1")
        if self.fieldsolve_cell <= 0.0:
            raise ValueError("fieldsolve cell must be positive")
        if self.fieldsolve_box_factor < 10.0:
            raise ValueError("fieldsolve box factor must be >= 10")


# configuration schema: key -> (dimension, required)

_LENGTH = {"m": 1.0, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9}
_CAP = {"F": 1.0, "pF": 1e-12, "fF": 1e-15}
_IND = {"H": 1.0, "uH": 1e-6, "µH": 1e-6, "nH": 1e-9}
_FREQ = {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9}
_AREA = {"m2": 1.0, "mm2": 1e-6, "um2": 1e-12, "µm2": 1e-12}
_NONE: dict[str, float] = {}

_UNITS = {"length": _LENGTH, "capacitance": _CAP, "inductance": _IND,
          "frequency": _FREQ, "area": _AREA, "scalar": _NONE}


def _chip_schema(side: str) -> dict[str, tuple[str, bool]]:
    p = f"chip.{side}"
    return {
        f"{p}.cpw.trace_width": ("length", True),
        f"{p}.cpw.trace_gap": ("length", True),
        f"{p}.cpw.substrate_eps_r": ("scalar", True),
        f"{p}.cpw.substrate_thickness": ("length", False),
        f"{p}.resonator.length": ("length", True),
        f"{p}.resonator.pocket_extension": ("length", True),
        f"{p}.transmon.junction_capacitance": ("capacitance", True),
        f"{p}.transmon.shunt_capacitance": ("capacitance", True),
        f"{p}.transmon.junction_inductance": ("inductance", True),
        f"{p}.transmon.c_eff": ("capacitance", False),
        f"{p}.transmon.flux_bias": ("scalar", False),
        f"{p}.transmon.baseline_q": ("scalar", False),
        f"{p}.readout.coupling_q": ("scalar", True),
        f"{p}.readout.g_qr": ("frequency", False),
    }


_SCHEMA: dict[str, tuple[str, bool]] = {
    **_chip_schema("bottom"),
    **_chip_schema("top"),
    "stack.interlayer_thickness": ("length", True),
    "stack.interlayer_eps_r": ("scalar", True),
    "stack.interlayer_tan_delta": ("scalar", False),
    "coupling.pad_overlap_area": ("area", True),
    "coupling.f_bottom": ("frequency", False),
    "coupling.f_top": ("frequency", False),
    "loss.participation.substrate": ("scalar", False),
    "loss.participation.interlayer": ("scalar", False),
    "fieldsolve.cell": ("length", False),
    "fieldsolve.box_factor": ("scalar", False),
}

_VALUE_RE = re.compile(
    r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*(\S*)$")


def _parse_entries(text: str) -> tuple[dict[str, float], list[str]]:
    entries: dict[str, float] = {}
    errors: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value'")
            continue
        key, rhs = (part.strip() for part in line.split("=", 1))
        if key not in _SCHEMA:
            errors.append(f"line {lineno}: unknown key {key!r}")
            continue
        if key in entries:
            errors.append(f"line {lineno}: duplicate key {key!r}")
            continue
        m = _VALUE_RE.match(rhs)
        if not m:
            errors.append(f"line {lineno}: cannot parse value {rhs!r}")
            continue
        magnitude = float(m.group(1))
        unit = m.group(2)
        dimension, _ = _SCHEMA[key]
        units = _UNITS[dimension]
        if unit:
            if unit not in units:
                errors.append(
                    f"line {lineno}: unit {unit!r} is not a {dimension}")
                continue
            magnitude *= units[unit]
        elif units:
            errors.append(f"line {lineno}: {key} needs a {dimension} unit")
            continue
        entries[key] = magnitude
    return entries, errors


def parse_config(text: str) -> DeviceSpec:
    """Parse and validate a device config; every problem is reported."""
    entries, errors = _parse_entries(text)
    for key, (_, required) in _SCHEMA.items():
        if required and key not in entries:
            errors.append(f"missing required key {key!r}")
    if errors:
        raise ConfigError(errors)

    def build_chip(side: str) -> ChipSpec:
        p = f"chip.{side}"
        geometry = cpw.CpwGeometry(
            trace_width=entries[f"{p}.cpw.trace_width"],
            gap=entries[f"{p}.cpw.trace_gap"],
            eps_substrate=entries[f"{p}.cpw.substrate_eps_r"],
            eps_superstrate=entries["stack.interlayer_eps_r"])
        eps_eff = cpw.effective_permittivity(geometry.eps_substrate,
                                             geometry.eps_superstrate)
        resonator = cpw.ResonatorSpec(
            physical_length=entries[f"{p}.resonator.length"],
            pocket_extension=entries[f"{p}.resonator.pocket_extension"],
            eps_eff=eps_eff)
        pars = transmon.TransmonParams(
            c_junction=entries[f"{p}.transmon.junction_capacitance"],
            c_shunt=entries[f"{p}.transmon.shunt_capacitance"],
            l_junction=entries[f"{p}.transmon.junction_inductance"],
            c_eff=entries.get(f"{p}.transmon.c_eff"))
        return ChipSpec(
            name=side, geometry=geometry, resonator=resonator,
            transmon=pars,
            coupling_q=entries[f"{p}.readout.coupling_q"],
            substrate_thickness=entries.get(f"{p}.cpw.substrate_thickness"),
            flux_bias=entries.get(f"{p}.transmon.flux_bias", 0.0),
            baseline_q=entries.get(f"{p}.transmon.baseline_q"),
            g_qr=entries.get(f"{p}.readout.g_qr"))

    participation = None
    p_sub = entries.get("loss.participation.substrate")
    p_int = entries.get("loss.participation.interlayer")
    if (p_sub is None) != (p_int is None):
        errors.append("loss.participation needs both substrate and "
                      "interlayer, or neither")
    elif p_sub is not None:
        participation = {"substrate": p_sub, "interlayer": p_int}

    chips = {}
    for side in ("bottom", "top"):
        try:
            chips[side] = build_chip(side)
        except ValueError as exc:
            errors.append(f"chip.{side}: {exc}")

    # path-qualified scalar checks so stack problems aggregate with chip
    # ones; DeviceSpec's own validation stays as the backstop
    if entries["stack.interlayer_thickness"] <= 0.0:
        errors.append("stack.interlayer_thickness must be positive")
    if entries["stack.interlayer_eps_r"] < 1.0:
        errors.append("stack.interlayer_eps_r must be >= 1")
    if entries.get("stack.interlayer_tan_delta", 0.0) < 0.0:
        errors.append("stack.interlayer_tan_delta must be >= 0")
    if entries["coupling.pad_overlap_area"] <= 0.0:
        errors.append("coupling.pad_overlap_area must be positive")
    if errors:
        raise ConfigError(errors)

    try:
        return DeviceSpec(
            bottom=chips["bottom"], top=chips["top"],
            interlayer_thickness=entries["stack.interlayer_thickness"],
            interlayer_eps_r=entries["stack.interlayer_eps_r"],
            interlayer_tan_delta=entries.get("stack.interlayer_tan_delta",
                                             0.0),
            pad_overlap_area=entries["coupling.pad_overlap_area"],
            coupling_f_bottom=entries.get("coupling.f_bottom"),
            coupling_f_top=entries.get("coupling.f_top"),
            participation=participation,
            fieldsolve_cell=entries.get("fieldsolve.cell", 1e-6),
            fieldsolve_box_factor=entries.get("fieldsolve.box_factor", 10.0))
    except ValueError as exc:
        raise ConfigError([str(exc)]) from exc


def load_config(path: str) -> DeviceSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def default_config_text() -> str:
    """Text of the packaged paper-default preset."""
    return (resources.files("flipkit.presets") / "paper-default.cfg"
            ).read_text(encoding="utf-8")


def paper_default() -> DeviceSpec:
    return parse_config(default_config_text())


# report assembly


def _round12(x: float) -> float:
    return float(f"{x:.12g}")


def _v(value, by: str) -> dict:
    if value is None:
        return {"value": None, "by": by}
    return {"value": _round12(float(value)), "by": by}


@dataclass
class DeviceReport:
    """Analysis result: ordered nested dict of provenance-tagged values."""

    data: dict

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "DeviceReport":
        return cls(data=json.loads(text))


def resolve_participation(spec: DeviceSpec) -> tuple[dict[str, float], str]:
    """Energy participation per dielectric region and where it came from.

    Config values win; otherwise the bottom chip's cross-section is
    solved at the configured fieldsolve cell size.
    """
    if spec.participation is not None:
        return dict(spec.participation), "config:loss.participation"
    section = fieldsolve.cpw_cross_section(
        spec.bottom.geometry, cell=spec.fieldsolve_cell,
        box_factor=spec.fieldsolve_box_factor,
        interlayer_thickness=spec.interlayer_thickness)
    sol = fieldsolve.solve_potential(section)
    return (fieldsolve.energy_participation(sol),
            "fieldsolve.energy_participation")


def _loss_budget(spec: DeviceSpec, baseline_q: float, frequency: float,
                 participation: dict[str, float]) -> loss.LossBudget:
    regions = {}
    for name, p in participation.items():
        tan_d = spec.interlayer_tan_delta if name == "interlayer" else 0.0
        regions[name] = (p, tan_d)
    return loss.LossBudget(mode_frequency=frequency, baseline_q=baseline_q,
                           regions=regions)


def _qubit_numbers(chip: ChipSpec) -> dict:
    pars = chip.transmon
    ej_max = transmon.josephson_energy(pars.l_junction)
    ej = transmon.squid_josephson_energy(ej_max, chip.flux_bias)
    ec = transmon.charging_energy(pars.c_total)
    out = {
        "ej": ej,
        "ec": ec,
        "f_literal": transmon.transmon_frequency(ec, ej),
        "f_cpb": transmon.cpb_frequency(ec, ej),
        "anharm": transmon.anharmonicity(ec),
        "anharm_cpb": transmon.cpb_anharmonicity(ec, ej),
        "f_c_eff": None,
    }
    if pars.c_eff is not None:
        ec_eff = transmon.charging_energy(pars.c_eff)
        out["f_c_eff"] = transmon.transmon_frequency(ec_eff, ej)
    return out


def _participation_field(participation: dict[str, float],
                         source: str) -> dict:
    return {name: _v(p, source) for name, p in participation.items()}


def _qubit_row(spec: DeviceSpec, chip: ChipSpec,
               participation: dict[str, float], part_src: str) -> dict:
    nums = _qubit_numbers(chip)
    row = {
        "name": f"{chip.name}_qubit",
        "kind": "qubit",
        "frequency_hz": _v(nums["f_literal"], "transmon.transmon_frequency"),
        "frequency_c_eff_hz": _v(
            nums["f_c_eff"],
            "transmon.transmon_frequency with config:transmon.c_eff"
            if nums["f_c_eff"] is not None
            else "not computed: transmon.c_eff not configured"),
        "frequency_cpb_hz": _v(nums["f_cpb"], "transmon.cpb_frequency"),
        "anharmonicity_hz": _v(nums["anharm"], "transmon.anharmonicity"),
        "anharmonicity_cpb_hz": _v(nums["anharm_cpb"],
                                   "transmon.cpb_anharmonicity"),
        "ej_over_ec": _v(transmon.ej_ec_ratio(nums["ec"], nums["ej"]),
                         "transmon.ej_ec_ratio"),
    }
    res_mid = cpw.resonator_interval(chip.resonator).midpoint
    if chip.g_qr is not None:
        chi = coupling_mod.dispersive_shift(
            chip.g_qr, nums["f_literal"] - res_mid, nums["anharm"])
        row["chi_hz"] = _v(chi, "coupling.dispersive_shift")
    else:
        row["chi_hz"] = _v(None, "not computed: readout.g_qr not configured")
    if chip.baseline_q is not None:
        budget = _loss_budget(spec, chip.baseline_q, nums["f_literal"],
                              participation)
        q_total = loss.q_with_dielectric(budget)
        row["q_total"] = _v(q_total, "loss.q_with_dielectric")
        row["t1_upper_s"] = _v(
            loss.t1_upper_bound(q_total, nums["f_literal"]),
            "loss.t1_upper_bound")
        row["gamma_cap_per_s"] = _v(
            loss.dielectric_decay_rate(budget),
            "loss.dielectric_decay_rate")
    else:
        why = "not computed: transmon.baseline_q not configured"
        row["q_total"] = _v(None, why)
        row["t1_upper_s"] = _v(None, why)
        row["gamma_cap_per_s"] = _v(None, why)
    row["participation"] = _participation_field(participation, part_src)
    return row


def _resonator_row(spec: DeviceSpec, chip: ChipSpec,
                   participation: dict[str, float], part_src: str) -> dict:
    interval = cpw.resonator_interval(chip.resonator)
    mid = interval.midpoint
    budget = _loss_budget(spec, chip.coupling_q, mid, participation)
    q_total = loss.q_with_dielectric(budget)
    return {
        "name": f"{chip.name}_resonator",
        "kind": "resonator",
        "eps_eff": _v(chip.resonator.eps_eff, "cpw.effective_permittivity"),
        "frequency_low_hz": _v(interval.lo,
                               "cpw.quarter_wave_frequency (full length)"),
        "frequency_high_hz": _v(
            interval.hi, "cpw.quarter_wave_frequency (extension removed)"),
        "q_total": _v(q_total,
                      "loss.q_with_dielectric from config:readout.coupling_q"),
        "bandwidth_hz": _v(mid / q_total,
                           "interval midpoint / q_total"),
        "t1_upper_s": _v(loss.t1_upper_bound(q_total, mid),
                         "loss.t1_upper_bound at the interval midpoint"),
        "gamma_cap_per_s": _v(loss.dielectric_decay_rate(budget),
                              "loss.dielectric_decay_rate"),
        "participation": _participation_field(participation, part_src),
    }


def _coupling_frequencies(spec: DeviceSpec) -> tuple[float, str, float, str]:
    if spec.coupling_f_bottom is not None:
        f1, src1 = spec.coupling_f_bottom, "config:coupling.f_bottom"
    else:
        f1 = _qubit_numbers(spec.bottom)["f_literal"]
        src1 = "transmon.transmon_frequency"
    if spec.coupling_f_top is not None:
        f2, src2 = spec.coupling_f_top, "config:coupling.f_top"
    else:
        f2 = _qubit_numbers(spec.top)["f_literal"]
        src2 = "transmon.transmon_frequency"
    return f1, src1, f2, src2


def _coupling_block(spec: DeviceSpec,
                    thickness: float | None = None) -> dict:
    d = spec.interlayer_thickness if thickness is None else thickness
    cg = coupling_mod.parallel_plate_cg(spec.pad_overlap_area, d,
                                        spec.interlayer_eps_r)
    r = coupling_mod.capacitance_ratio(cg, spec.bottom.transmon.c_total,
                                       spec.top.transmon.c_total)
    f1, src1, f2, src2 = _coupling_frequencies(spec)
    g = coupling_mod.coupling_strength(r, f1, f2)
    lo, hi = coupling_mod.hybridized_modes(f1, f2, g)
    return {
        "cg_f": _v(cg, "coupling.parallel_plate_cg"),
        "r": _v(r, "coupling.capacitance_ratio"),
        "f_bottom_hz": _v(f1, src1),
        "f_top_hz": _v(f2, src2),
        "g_hz": _v(g, "coupling.coupling_strength"),
        "hybrid_lower_hz": _v(lo, "coupling.hybridized_modes"),
        "hybrid_upper_hz": _v(hi, "coupling.hybridized_modes"),
    }


def analyze(spec: DeviceSpec) -> DeviceReport:
    """Full-device report: four mode rows plus the coupling block."""
    participation, part_src = resolve_participation(spec)
    data = {
        "schema": "flipkit.device.report/1",
        "stack": {
            "interlayer_thickness_m": _v(
                spec.interlayer_thickness,
                "config:stack.interlayer_thickness"),
            "interlayer_eps_r": _v(spec.interlayer_eps_r,
                                   "config:stack.interlayer_eps_r"),
            "interlayer_tan_delta": _v(spec.interlayer_tan_delta,
                                       "config:stack.interlayer_tan_delta"),
            "pad_overlap_area_m2": _v(spec.pad_overlap_area,
                                      "config:coupling.pad_overlap_area"),
        },
        "modes": [
            _qubit_row(spec, spec.bottom, participation, part_src),
            _qubit_row(spec, spec.top, participation, part_src),
            _resonator_row(spec, spec.bottom, participation, part_src),
            _resonator_row(spec, spec.top, participation, part_src),
        ],
        "coupling": _coupling_block(spec),
    }
    return DeviceReport(data=data)


# sweeps


def sweep_worker_count() -> int:
    """Thread count for sweeps: FLIPKIT_THREADS, 0/unset meaning all cores."""
    raw = os.environ.get("FLIPKIT_THREADS", "0").strip()
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"FLIPKIT_THREADS must be an integer, got {raw!r}"
                         ) from exc
    if n < 0:
        raise ValueError("FLIPKIT_THREADS must be >= 0")
    if n == 0:
        return os.cpu_count() or 1
    return n


def _notch_for(chip: ChipSpec) -> network.NotchResonator:
    mid = cpw.resonator_interval(chip.resonator).midpoint
    return network.NotchResonator(f_r=mid, q_loaded=chip.coupling_q,
                                  q_coupling=chip.coupling_q)


def _thickness_row(spec: DeviceSpec, d: float) -> dict:
    cg = coupling_mod.parallel_plate_cg(spec.pad_overlap_area, d,
                                        spec.interlayer_eps_r)
    r = coupling_mod.capacitance_ratio(cg, spec.bottom.transmon.c_total,
                                       spec.top.transmon.c_total)
    f1, _, f2, _ = _coupling_frequencies(spec)
    g = coupling_mod.coupling_strength(r, f1, f2)
    lo, hi = coupling_mod.hybridized_modes(f1, f2, g)
    near = _notch_for(spec.bottom)
    far = _notch_for(spec.top)
    halfspan = 10.0 * near.f_r / near.q_loaded
    band = RealInterval(near.f_r - halfspan, near.f_r + halfspan)
    dip = network.crosstalk_dip(cg, near, far, band)
    return {
        "cg_f": cg,
        "r": r,
        "g_hz": g,
        "hybrid_lower_hz": lo,
        "hybrid_upper_hz": hi,
        "crosstalk_db": dip,
        "qubit_bottom_hz": _qubit_numbers(spec.bottom)["f_literal"],
        "qubit_top_hz": _qubit_numbers(spec.top)["f_literal"],
    }


def _loss_tangent_row(spec: DeviceSpec, tan_d: float,
                      participation: dict[str, float]) -> dict:
    row: dict[str, float] = {}
    for chip in (spec.bottom, spec.top):
        if chip.baseline_q is None:
            raise ConfigError(
                [f"chip.{chip.name}.transmon.baseline_q is required for a "
                 "loss_tangent sweep"])
        regions = {
            name: (p, tan_d if name == "interlayer" else 0.0)
            for name, p in participation.items()}
        f_q = _qubit_numbers(chip)["f_literal"]
        budget = loss.LossBudget(mode_frequency=f_q,
                                 baseline_q=chip.baseline_q, regions=regions)
        q_total = loss.q_with_dielectric(budget)
        row[f"q_total_{chip.name}"] = q_total
        row[f"t1_upper_{chip.name}_s"] = loss.t1_upper_bound(q_total, f_q)
        row[f"gamma_cap_{chip.name}_per_s"] = loss.dielectric_decay_rate(
            budget)
        row[f"qubit_{chip.name}_hz"] = f_q
    return row


def sweep(spec: DeviceSpec, parameter: str, values) -> SweepTable:
    """Parametric sweep over interlayer_thickness (m) or loss_tangent.

    Rows are computed point-wise (in parallel up to sweep_worker_count()
    threads) and assembled in grid order, so the table is deterministic.
    """
    values = [float(x) for x in values]
    if not values:
        raise ValueError("empty sweep grid")
    if parameter == "interlayer_thickness":
        if min(values) <= 0.0:
            raise ValueError("thickness values must be positive")

        def row_fn(x: float) -> dict:
            return _thickness_row(spec, x)

        table = SweepTable(param_name="interlayer_thickness_m")
    elif parameter == "loss_tangent":
        if min(values) < 0.0:
            raise ValueError("loss tangents must be >= 0")
        participation, _ = resolve_participation(spec)

        def row_fn(x: float) -> dict:
            return _loss_tangent_row(spec, x, participation)

        table = SweepTable(param_name="tan_delta")
    else:
        raise ValueError(
            f"unknown sweep parameter {parameter!r}; "
            f"expected one of {SWEEP_PARAMETERS}")

    workers = sweep_worker_count()
    if workers == 1 or len(values) == 1:
        rows = [row_fn(x) for x in values]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row_fn, values))
    for x, row in zip(values, rows):
        table.add_row(x, **row)
    return table
