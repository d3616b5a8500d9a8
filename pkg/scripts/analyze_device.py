#!/usr/bin/env python3
"""Print the full analysis report for a device config.

By default this loads the packaged two-chip preset and prints a compact
human-readable summary (one line per mode, then the coupling block).
Pass --json for the raw provenance-tagged report, --config for your own
config file.
"""

from __future__ import annotations

import argparse
import sys

from flipkit import device


def _num(field: dict, scale: float = 1.0, unit: str = "") -> str:
    value = field["value"]
    if value is None:
        return "--"
    return f"{value * scale:.6g}{unit}"


def print_summary(report: device.DeviceReport) -> None:
    data = report.data
    stack = data["stack"]
    print(f"interlayer: d = {_num(stack['interlayer_thickness_m'], 1e3)} mm, "
          f"eps_r = {_num(stack['interlayer_eps_r'])}, "
          f"tan_delta = {_num(stack['interlayer_tan_delta'])}")
    print()
    for mode in data["modes"]:
        if mode["kind"] == "qubit":
            line = (f"{mode['name']:<17} f = {_num(mode['frequency_hz'], 1e-9)} GHz"
                    f"  (CPB {_num(mode['frequency_cpb_hz'], 1e-9)} GHz)"
                    f"  alpha = {_num(mode['anharmonicity_hz'], 1e-6)} MHz"
                    f"  Ej/Ec = {_num(mode['ej_over_ec'])}")
            if mode["t1_upper_s"]["value"] is not None:
                line += f"  T1 <= {_num(mode['t1_upper_s'], 1e6)} us"
        else:
            line = (f"{mode['name']:<17} f in "
                    f"[{_num(mode['frequency_low_hz'], 1e-9)}, "
                    f"{_num(mode['frequency_high_hz'], 1e-9)}] GHz"
                    f"  Q = {_num(mode['q_total'])}"
                    f"  bw = {_num(mode['bandwidth_hz'], 1e-6)} MHz")
        print(line)
    print()
    cpl = data["coupling"]
    print(f"coupling: Cg = {_num(cpl['cg_f'], 1e15)} fF, r = {_num(cpl['r'])}, "
          f"g = {_num(cpl['g_hz'], 1e-6)} MHz")
    print(f"hybridized modes: {_num(cpl['hybrid_lower_hz'], 1e-9)} / "
          f"{_num(cpl['hybrid_upper_hz'], 1e-9)} GHz "
          f"(bare {_num(cpl['f_bottom_hz'], 1e-9)} / "
          f"{_num(cpl['f_top_hz'], 1e-9)} GHz)")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--config", default=None,
                        help="config file (default: packaged preset)")
    parser.add_argument("--json", action="store_true",
                        help="print the raw report instead of the summary")
    args = parser.parse_args(argv)

    if args.config is None:
        spec = device.paper_default()
    else:
        spec = device.load_config(args.config)
    report = device.analyze(spec)
    if args.json:
        sys.stdout.write(report.to_json())
    else:
        print_summary(report)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
