#!/usr/bin/env python3
"""Port-matching scan: worst in-band |S11| of the feedline vs port impedance."""

from __future__ import annotations

import argparse
import csv
import pathlib

import numpy as np

from flipkit import cpw, network
from flipkit.numerics import RealInterval


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.strip())
    parser.add_argument("--width", type=float, default=10e-6)
    parser.add_argument("--gap", type=float, default=5.806e-6)
    parser.add_argument("--eps-eff", type=float, default=6.45)
    parser.add_argument("--length", type=float, default=3e-3)
    parser.add_argument("--band", default="4e9:8e9")
    parser.add_argument("--step", type=float, default=0.1)
    parser.add_argument("--out", default="out")
    args = parser.parse_args(argv)

    lo, hi = (float(x) for x in args.band.split(":"))
    band = RealInterval(lo, hi)
    z_line = cpw.characteristic_impedance(args.width, args.gap, args.eps_eff)

    z_ports = np.arange(40.0, 60.0 + args.step / 2, args.step)
    worst = [network.worst_case_reflection(z_line, z, band, args.length,
                                           args.eps_eff)
             for z in z_ports]
    best = int(np.argmin(worst))

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "match_scan.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["z_port_ohm", "worst_s11_db"])
        for z, w in zip(z_ports, worst):
            writer.writerow([f"{z:.12g}", f"{w:.12g}"])

    print(f"line Z0 = {z_line:.4f} ohm (w = {args.width * 1e6:g} um, "
          f"s = {args.gap * 1e6:g} um, eps_eff = {args.eps_eff:g})")
    print(f"best port: {z_ports[best]:.1f} ohm, "
          f"worst-case S11 = {worst[best]:.1f} dB")
    print(f"wrote {out / 'match_scan.csv'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
