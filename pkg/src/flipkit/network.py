"""Microwave two-port algebra and scattering-domain models.

ABCD chains for lossless lines, conversion to S-parameters at an
explicit reference impedance, the side-coupled (notch) resonator line
shape, -3 dB bandwidth extraction, and two scattering studies used by
the device pipeline: worst-case in-band reflection versus port
impedance, and the interchip crosstalk dip from a bridging capacitance.

Conventions.  ABCD entries follow [V1; I1] = [A B; C D] [V2; I2] with
I2 flowing out of port 2.  S-parameters are always formed at a caller
supplied real reference impedance; nothing in this module renormalizes
a response from one reference to another, because doing so silently is
exactly the kind of mistake the explicit z_ref argument exists to
prevent.  Magnitudes in dB are 20 log10 |S|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import C_LIGHT
from .numerics import RealInterval

__all__ = [
    "TwoPortABCD",
    "NotchResonator",
    "FrequencyResponse",
    "ExtractionError",
    "AmbiguousDipError",
    "tline_abcd",
    "cascade",
    "abcd_to_s",
    "notch_s21",
    "extract_q_fwhm",
    "worst_case_reflection",
    "crosstalk_dip",
    "frequency_grid",
]

# sweep density used when a caller gives only a band
DEFAULT_GRID_POINTS = 2001

_DB_FLOOR = 1e-30


class ExtractionError(RuntimeError):
    """Resonance feature absent or too shallow to measure."""


class AmbiguousDipError(ExtractionError):
    """More than one dip crosses the half-power threshold."""


@dataclass(frozen=True)
class TwoPortABCD:
    """Chain matrix of a reciprocal two-port."""

    a: complex
    b: complex
    c: complex
    d: complex

    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c


@dataclass(frozen=True)
class NotchResonator:
    """Side-coupled resonator seen in transmission on a feedline.

    f_r is the bare resonance, q_loaded and q_coupling the loaded and
    coupling quality factors (1/Ql >= 1/Qc), chi the dispersive pull of
    a qubit in Hz per excitation step.
    """

    f_r: float
    q_loaded: float
    q_coupling: float
    chi: float = 0.0

    def __post_init__(self):
        if self.f_r <= 0.0:
            raise ValueError("resonance frequency must be positive")
        if self.q_loaded <= 0.0 or self.q_coupling <= 0.0:
            raise ValueError("quality factors must be positive")
        if self.q_loaded > self.q_coupling * (1.0 + 1e-12):
            raise ValueError("loaded Q cannot exceed coupling Q")

    def dressed_frequency(self, qubit_state: int = 0) -> float:
        """Resonator frequency pulled by the qubit state (0 or 1)."""
        return self.f_r + self.chi * (1.0 - 2.0 * qubit_state)


@dataclass
class FrequencyResponse:
    """Sampled S-parameters on an ascending frequency grid."""

    frequencies: np.ndarray
    s_params: dict[str, np.ndarray] = field(default_factory=dict)
    z_ref: float = 50.0

    def __post_init__(self):
        self.frequencies = np.asarray(self.frequencies, dtype=float)
        if self.frequencies.ndim != 1 or self.frequencies.size < 1:
            raise ValueError("frequency grid must be a 1-d array")
        if np.any(np.diff(self.frequencies) <= 0.0):
            raise ValueError("frequency grid must be strictly ascending")
        for name, vals in self.s_params.items():
            vals = np.asarray(vals, dtype=complex)
            if vals.shape != self.frequencies.shape:
                raise ValueError(f"{name} length does not match grid")
            self.s_params[name] = vals
        if self.z_ref <= 0.0:
            raise ValueError("reference impedance must be positive")

    def magnitude_db(self, name: str) -> np.ndarray:
        mag = np.abs(self.s_params[name])
        return 20.0 * np.log10(np.maximum(mag, _DB_FLOOR))

    def to_csv(self) -> str:
        names = list(self.s_params)
        header = "freq_hz," + ",".join(
            f"{n.lower()}_re,{n.lower()}_im" for n in names)
        lines = [header]
        for i, f in enumerate(self.frequencies):
            cells = [f"{f:.12g}"]
            for n in names:
                v = self.s_params[n][i]
                cells.append(f"{v.real:.12g}")
                cells.append(f"{v.imag:.12g}")
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def frequency_grid(band: RealInterval,
                   points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    if points < 2:
        raise ValueError("need at least two grid points")
    return np.linspace(band.lo, band.hi, points)


def tline_abcd(z0: float, beta_l: float) -> TwoPortABCD:
    """Lossless line section: A = D = cos(beta l), B = j z0 sin(beta l),
    C = j sin(beta l) / z0.  Unimodular by construction."""
    if z0 <= 0.0:
        raise ValueError("line impedance must be positive")
    bl = float(beta_l)
    return TwoPortABCD(a=complex(math.cos(bl)),
                       b=1j * z0 * math.sin(bl),
                       c=1j * math.sin(bl) / z0,
                       d=complex(math.cos(bl)))


def cascade(*sections: TwoPortABCD) -> TwoPortABCD:
    """Chain-matrix product of two-ports, first argument nearest port 1."""
    if not sections:
        raise ValueError("nothing to cascade")
    a, b, c, d = 1.0 + 0.0j, 0.0j, 0.0j, 1.0 + 0.0j
    for s in sections:
        a, b, c, d = (a * s.a + b * s.c, a * s.b + b * s.d,
                      c * s.a + d * s.c, c * s.b + d * s.d)
    return TwoPortABCD(a, b, c, d)


def abcd_to_s(m: TwoPortABCD, z_ref: float) -> tuple[complex, complex,
                                                     complex, complex]:
    """(S11, S12, S21, S22) of an ABCD two-port at reference z_ref."""
    if z_ref <= 0.0:
        raise ValueError("reference impedance must be positive")
    a, b, c, d = m.a, m.b, m.c, m.d
    denom = a + b / z_ref + c * z_ref + d
    if abs(denom) < 1e-300:
        raise ZeroDivisionError("degenerate two-port: singular denominator")
    s11 = (a + b / z_ref - c * z_ref - d) / denom
    s21 = 2.0 / denom
    s12 = 2.0 * m.determinant() / denom
    s22 = (-a + b / z_ref - c * z_ref + d) / denom
    return s11, s12, s21, s22


def notch_s21(resonator: NotchResonator, frequencies,
              qubit_state: int = 0, z_ref: float = 50.0) -> FrequencyResponse:
    """Transmission past a side-coupled resonator.

    S21(f) = 1 - (Ql/Qc) / (1 + 2j Ql (f - fd)/fd) with fd the dressed
    resonance.  Far from resonance |S21| -> 1; at f = fd the dip depth
    is 1 - Ql/Qc.
    """
    if qubit_state not in (0, 1):
        raise ValueError("qubit_state must be 0 or 1")
    f = np.asarray(frequencies, dtype=float)
    fd = resonator.dressed_frequency(qubit_state)
    depth = resonator.q_loaded / resonator.q_coupling
    s21 = 1.0 - depth / (1.0 + 2j * resonator.q_loaded * (f - fd) / fd)
    return FrequencyResponse(frequencies=f, s_params={"s21": s21},
                             z_ref=z_ref)


def extract_q_fwhm(response: FrequencyResponse,
                   name: str = "s21") -> tuple[float, float, float]:
    """(f_r, Q, bandwidth) from the -3 dB full width of a dip.

    The resonance is the sample of minimum |S21|; the bandwidth comes
    from linear interpolation of the two crossings of the -3 dB level
    on either side of it, and Q = f_r / bandwidth.  A trace with no dip
    reaching -3 dB raises ExtractionError; more than one separate dip
    below the threshold raises AmbiguousDipError.
    """
    if name not in response.s_params:
        raise KeyError(f"response has no {name!r} trace")
    db = response.magnitude_db(name)
    f = response.frequencies
    below = db < -3.0
    if not below.any():
        raise ExtractionError("no dip reaches -3 dB; nothing to extract")
    # count separate below-threshold runs
    runs = int(np.sum(below[1:] & ~below[:-1])) + int(below[0])
    if runs > 1:
        raise AmbiguousDipError(f"{runs} separate dips cross -3 dB")

    i_min = int(np.argmin(db))
    f_r = float(f[i_min])

    def crossing(i_inside: int, step: int) -> float:
        # walk outward from the dip until the trace comes back above -3 dB
        j = i_inside
        while 0 <= j + step < len(db) and db[j + step] < -3.0:
            j += step
        k = j + step
        if k < 0 or k >= len(db):
            raise ExtractionError("dip is cut off by the grid edge")
        # linear interpolation between the inside and outside samples
        frac = (-3.0 - db[j]) / (db[k] - db[j])
        return float(f[j] + frac * (f[k] - f[j]))

    f_lo = crossing(i_min, -1)
    f_hi = crossing(i_min, +1)
    bandwidth = f_hi - f_lo
    if bandwidth <= 0.0:
        raise ExtractionError("degenerate bandwidth")
    return f_r, f_r / bandwidth, bandwidth


def worst_case_reflection(line_z0: float, z_port: float,
                          band: RealInterval, line_length: float,
                          eps_eff: float,
                          points: int = DEFAULT_GRID_POINTS) -> float:
    """Max in-band |S11| in dB of a lossless line between z_port ports.

    Sweeps the band on a uniform grid, forms S11 of the line at
    reference z_port, and returns the worst magnitude.  At z_port equal
    to the line impedance the result is reflectionless down to
    rounding, well below -100 dB.
    """
    if line_z0 <= 0.0 or z_port <= 0.0:
        raise ValueError("impedances must be positive")
    if line_length <= 0.0:
        raise ValueError("line length must be positive")
    f = frequency_grid(band, points)
    beta_l = 2.0 * math.pi * f * math.sqrt(eps_eff) * line_length / C_LIGHT
    cos_bl = np.cos(beta_l)
    sin_bl = np.sin(beta_l)
    # S11 of [cos, j z0 sin; j sin / z0, cos] at reference z_port
    num = 1j * sin_bl * (line_z0 / z_port - z_port / line_z0)
    den = 2.0 * cos_bl + 1j * sin_bl * (line_z0 / z_port + z_port / line_z0)
    mag = np.abs(num / den)
    return float(np.max(20.0 * np.log10(np.maximum(mag, _DB_FLOOR))))


def _shunt_admittance(res: NotchResonator, f: np.ndarray,
                      z0: float, qubit_state: int = 0) -> np.ndarray:
    # shunt element that reproduces notch_s21 exactly on a matched line
    fd = res.dressed_frequency(qubit_state)
    q = res.q_loaded / res.q_coupling
    x = 2.0 * res.q_loaded * (f - fd) / fd
    den = (1.0 - q) + 1j * x
    # a lossless notch sampled exactly on resonance is a short; floor the
    # denominator so the nodal solve sees a large finite admittance
    small = np.abs(den) < 1e-9
    if np.any(small):
        den = np.where(small, 1e-9 + 0j, den)
    return (2.0 / z0) * q / den


def crosstalk_dip(bridge_capacitance: float, near: NotchResonator,
                  far: NotchResonator, band: RealInterval, z0: float = 50.0,
                  line_length: float = 2e-3, eps_eff: float = 6.45,
                  points: int = DEFAULT_GRID_POINTS) -> float:
    """Far-side transmission dip (dB, >= 0) caused by a bridging capacitor.

    Lumped model of the two feedlines: each is split at its midpoint
    where its notch resonator loads it, and the bridge capacitance ties
    the two midpoints together.  The returned number is the depth of
    the dip that the near line's resonance carves into the far line's
    transmission, max over the band.  Zero bridge gives exactly zero.
    """
    if bridge_capacitance < 0.0:
        raise ValueError("bridge capacitance must be >= 0")
    if bridge_capacitance == 0.0:
        return 0.0

    f = frequency_grid(band, points)
    w = 2.0 * math.pi * f
    beta_l = w * math.sqrt(eps_eff) * (0.5 * line_length) / C_LIGHT
    sin_bl = np.sin(beta_l)
    if np.any(np.abs(sin_bl) < 1e-12):
        raise ZeroDivisionError("half-line is a multiple of a half wave")
    cos_bl = np.cos(beta_l)

    # nodal admittance entries of one half-line (lossless, unimodular)
    y_self = cos_bl / (1j * z0 * sin_bl)
    y_mut = -1.0 / (1j * z0 * sin_bl)

    y_near = _shunt_admittance(near, f, z0)
    y_far = _shunt_admittance(far, f, z0)
    y_bridge = 1j * w * bridge_capacitance
    g0 = 1.0 / z0

    n = f.size
    yfull = np.zeros((n, 6, 6), dtype=complex)
    # node order: p1, p2, p3, p4, m_near, m_far
    for a_node, b_node in ((0, 4), (1, 4), (2, 5), (3, 5)):
        yfull[:, a_node, a_node] += y_self
        yfull[:, b_node, b_node] += y_self
        yfull[:, a_node, b_node] += y_mut
        yfull[:, b_node, a_node] += y_mut
    yfull[:, 4, 4] += y_near
    yfull[:, 5, 5] += y_far
    yfull[:, 4, 4] += y_bridge
    yfull[:, 5, 5] += y_bridge
    yfull[:, 4, 5] -= y_bridge
    yfull[:, 5, 4] -= y_bridge

    # reduce the two internal nodes, then form S at z0 on ports 1-4
    ypp = yfull[:, :4, :4]
    ypi = yfull[:, :4, 4:]
    yip = yfull[:, 4:, :4]
    yii = yfull[:, 4:, 4:]
    yred = ypp - ypi @ np.linalg.solve(yii, yip)

    eye = np.eye(4)
    s = np.linalg.solve(eye + z0 * yred, eye - z0 * yred)

    s43 = s[:, 3, 2]
    db = 20.0 * np.log10(np.maximum(np.abs(s43), _DB_FLOOR))
    baseline = float(db[0])
    return max(baseline - float(db.min()), 0.0)
