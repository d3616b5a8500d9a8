"""Transmon energy scales and spectra.

Two routes to the qubit frequency: the closed-form asymptotic
expression f01 = (sqrt(8 Ec Ej) - Ec) / h, and a charge-basis
Cooper-pair-box diagonalization that serves as the oracle for it.
Energies are joules unless a name says otherwise; frequencies are Hz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import E_CHARGE, PHI_0, PLANCK_H
from .numerics import SymmetricMatrix, eig_sym

__all__ = [
    "DEFAULT_CUTOFF",
    "TransmonParams",
    "CutoffError",
    "charging_energy",
    "josephson_energy",
    "squid_josephson_energy",
    "transmon_frequency",
    "anharmonicity",
    "ej_ec_ratio",
    "cpb_spectrum",
    "cpb_frequency",
    "cpb_anharmonicity",
]

# eigenvector weight allowed on the outermost charge states before the
# basis is declared too small
_BOUNDARY_WEIGHT_LIMIT = 1e-8

DEFAULT_CUTOFF = 30


class CutoffError(RuntimeError):
    """Charge-basis cutoff too small for the requested level."""


@dataclass(frozen=True)
class TransmonParams:
    """Lumped transmon: junction + shunt capacitance, junction inductance.

    c_eff, when set, replaces c_junction + c_shunt as the total charging
    capacitance; it exists so a calibrated effective capacitance can be
    carried next to the literal layout values.
    """

    c_junction: float
    c_shunt: float
    l_junction: float
    c_eff: float | None = None

    def __post_init__(self):
        if self.c_junction < 0.0 or self.c_shunt < 0.0:
            raise ValueError("capacitances must be >= 0")
        if self.c_junction + self.c_shunt <= 0.0:
            raise ValueError("total capacitance must be positive")
        if self.l_junction <= 0.0:
            raise ValueError("junction inductance must be positive")
        if self.c_eff is not None and self.c_eff <= 0.0:
            raise ValueError("c_eff must be positive when given")

    @property
    def c_total(self) -> float:
        return self.c_junction + self.c_shunt

    def charging_capacitance(self, calibrated: bool = False) -> float:
        if calibrated and self.c_eff is not None:
            return self.c_eff
        return self.c_total


def charging_energy(c_total: float) -> float:
    """Single-electron charging energy Ec = e^2 / (2 C) in joules."""
    if c_total <= 0.0:
        raise ValueError("capacitance must be positive")
    return E_CHARGE * E_CHARGE / (2.0 * c_total)


def josephson_energy(l_junction: float) -> float:
    """Josephson energy Ej = (Phi0 / 2 pi)^2 / Lj in joules."""
    if l_junction <= 0.0:
        raise ValueError("inductance must be positive")
    phi = PHI_0 / (2.0 * math.pi)
    return phi * phi / l_junction


def squid_josephson_energy(ej_max: float, flux: float) -> float:
    """Symmetric-SQUID Ej(Phi) = Ej_max |cos(pi Phi / Phi0)|.

    flux is the external flux in units of Phi0.
    """
    if ej_max <= 0.0:
        raise ValueError("ej_max must be positive")
    return ej_max * abs(math.cos(math.pi * flux))


def transmon_frequency(ec: float, ej: float) -> float:
    """Asymptotic qubit frequency (sqrt(8 Ec Ej) - Ec) / h in Hz.

    Accurate deep in the transmon regime Ej/Ec >> 1; the charge-basis
    spectrum below is the check on it.
    """
    if ec <= 0.0 or ej <= 0.0:
        raise ValueError("energies must be positive")
    return (math.sqrt(8.0 * ec * ej) - ec) / PLANCK_H


def anharmonicity(ec: float) -> float:
    """Leading-order anharmonicity -Ec / h in Hz (negative)."""
    if ec <= 0.0:
        raise ValueError("Ec must be positive")
    return -ec / PLANCK_H


def ej_ec_ratio(ec: float, ej: float) -> float:
    """Ej / Ec; the transmon regime starts around 20 and up."""
    if ec <= 0.0 or ej <= 0.0:
        raise ValueError("energies must be positive")
    return ej / ec


def _cpb_hamiltonian(ec: float, ej: float, ng: float,
                     cutoff: int) -> SymmetricMatrix:
    dim = 2 * cutoff + 1
    h = SymmetricMatrix(dim)
    for idx in range(dim):
        n = idx - cutoff
        h.set(idx, idx, 4.0 * ec * (n - ng) ** 2)
    for idx in range(dim - 1):
        h.set(idx, idx + 1, -0.5 * ej)
    return h


def cpb_spectrum(ec: float, ej: float, ng: float = 0.0,
                 cutoff: int = DEFAULT_CUTOFF,
                 n_levels: int = 4) -> np.ndarray:
    """Lowest eigenenergies of the Cooper-pair box, charge basis.

    The Hamiltonian is diagonal 4 Ec (n - ng)^2 with -Ej/2 on the first
    off-diagonals, truncated at |n| <= cutoff.  The returned levels are
    ascending, in joules, referenced to the ground state at index 0.
    Raises CutoffError when any requested eigenvector keeps more than
    1e-8 of its weight on the outermost charge states, which means the
    truncation touched the result.
    """
    if ec <= 0.0 or ej < 0.0:
        raise ValueError("Ec must be positive and Ej >= 0")
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    dim = 2 * cutoff + 1
    if not 1 <= n_levels <= dim:
        raise ValueError("n_levels out of range for this cutoff")

    ham = _cpb_hamiltonian(ec, ej, ng, cutoff)
    w, vecs = eig_sym(ham)

    boundary = np.abs(vecs[0, :n_levels]) ** 2 + np.abs(vecs[-1, :n_levels]) ** 2
    worst = float(boundary.max())
    if worst > _BOUNDARY_WEIGHT_LIMIT:
        raise CutoffError(
            f"cutoff {cutoff} too small: boundary weight {worst:.3e} "
            f"exceeds {_BOUNDARY_WEIGHT_LIMIT:.0e}")
    return w[:n_levels]


def cpb_frequency(ec: float, ej: float, ng: float = 0.0,
                  cutoff: int = DEFAULT_CUTOFF) -> float:
    """Qubit transition (E1 - E0) / h from the charge-basis spectrum."""
    levels = cpb_spectrum(ec, ej, ng=ng, cutoff=cutoff, n_levels=2)
    return float(levels[1] - levels[0]) / PLANCK_H


def cpb_anharmonicity(ec: float, ej: float, ng: float = 0.0,
                      cutoff: int = DEFAULT_CUTOFF) -> float:
    """Anharmonicity (E12 - E01) / h from the charge-basis spectrum."""
    levels = cpb_spectrum(ec, ej, ng=ng, cutoff=cutoff, n_levels=3)
    f01 = float(levels[1] - levels[0])
    f12 = float(levels[2] - levels[1])
    return (f12 - f01) / PLANCK_H
