"""Coplanar waveguide design formulas.

Quasi-static conformal-mapping model for a CPW with infinitely thick
substrate below and superstrate above, zero-thickness metal, and no
covers.  Good to a percent or two against a finite-stack field solve,
which is all the front-end design loop needs.  All lengths are meters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import C_LIGHT, EPS_0, MU_0
from .numerics import RealInterval, elliptic_k, find_root

__all__ = [
    "CpwGeometry",
    "ResonatorSpec",
    "effective_permittivity",
    "modulus_k0",
    "characteristic_impedance",
    "solve_gap_for_impedance",
    "phase_velocity",
    "quarter_wave_frequency",
    "resonator_interval",
]


@dataclass(frozen=True)
class CpwGeometry:
    """Cross-section of a coplanar waveguide.

    trace_width and gap are the center strip width and the slot on each
    side.  eps_substrate fills the half-space below the metal plane,
    eps_superstrate the half-space above.
    """

    trace_width: float
    gap: float
    eps_substrate: float
    eps_superstrate: float = 1.0

    def __post_init__(self):
        if self.trace_width <= 0.0:
            raise ValueError("trace_width must be positive")
        if self.gap <= 0.0:
            raise ValueError("gap must be positive")
        if self.eps_substrate < 1.0 or self.eps_superstrate < 1.0:
            raise ValueError("relative permittivities must be >= 1")


@dataclass(frozen=True)
class ResonatorSpec:
    """Quarter-wave resonator: a shorted CPW section of known length.

    physical_length includes the pocket extension; dropping the
    extension gives the short-limit length used for the upper frequency
    bound.
    """

    physical_length: float
    pocket_extension: float
    eps_eff: float

    def __post_init__(self):
        if self.physical_length <= 0.0:
            raise ValueError("physical_length must be positive")
        if not 0.0 <= self.pocket_extension < self.physical_length:
            raise ValueError(
                "pocket_extension must be >= 0 and shorter than the line")
        if self.eps_eff < 1.0:
            raise ValueError("eps_eff must be >= 1")


def effective_permittivity(eps_substrate: float,
                           eps_superstrate: float = 1.0) -> float:
    """Half/half average seen by a CPW between two dielectric half-spaces."""
    if eps_substrate < 1.0 or eps_superstrate < 1.0:
        raise ValueError("relative permittivities must be >= 1")
    return 0.5 * (eps_substrate + eps_superstrate)


def modulus_k0(trace_width: float, gap: float) -> float:
    """Conformal-mapping modulus k0 = w / (w + 2s)."""
    if trace_width <= 0.0 or gap <= 0.0:
        raise ValueError("width and gap must be positive")
    return trace_width / (trace_width + 2.0 * gap)


def characteristic_impedance(trace_width: float, gap: float,
                             eps_eff: float) -> float:
    """CPW characteristic impedance (ohm) from the elliptic-integral ratio.

    Z0 = sqrt(mu0 / (16 eps0 eps_eff)) * K(k0') / K(k0) with
    k0 = w/(w+2s).  Monotone increasing in the gap for fixed width.
    """
    if eps_eff < 1.0:
        raise ValueError("eps_eff must be >= 1")
    k0 = modulus_k0(trace_width, gap)
    k0p = math.sqrt(1.0 - k0 * k0)
    scale = math.sqrt(MU_0 / (16.0 * EPS_0 * eps_eff))
    return scale * elliptic_k(k0p) / elliptic_k(k0)


def solve_gap_for_impedance(trace_width: float, eps_eff: float,
                            z_target: float,
                            bracket: RealInterval | None = None) -> float:
    """Gap that realizes a target impedance at fixed trace width.

    Bisection on the monotone map gap -> Z0.  The default bracket spans
    gaps from w/100 to 100 w, which covers any practical target; a
    target outside the achievable range raises the bracket error from
    the root finder.
    """
    if z_target <= 0.0:
        raise ValueError("target impedance must be positive")
    if bracket is None:
        bracket = RealInterval(1e-2 * trace_width, 100.0 * trace_width)

    def residual(s: float) -> float:
        return characteristic_impedance(trace_width, s, eps_eff) - z_target

    return find_root(residual, bracket, tol=1e-15 * bracket.hi)


def phase_velocity(eps_eff: float) -> float:
    """Quasi-TEM phase velocity c / sqrt(eps_eff) in m/s."""
    if eps_eff < 1.0:
        raise ValueError("eps_eff must be >= 1")
    return C_LIGHT / math.sqrt(eps_eff)


def quarter_wave_frequency(resonator: ResonatorSpec,
                           use_extension: bool = True) -> float:
    """Fundamental of a quarter-wave resonator, f = v_p / (4 l_eff).

    With use_extension the full physical length counts (lower bound of
    the fundamental); without it the pocket extension is subtracted,
    giving the shorter line and the upper bound.
    """
    length = resonator.physical_length
    if not use_extension:
        length -= resonator.pocket_extension
    return phase_velocity(resonator.eps_eff) / (4.0 * length)


def resonator_interval(resonator: ResonatorSpec) -> RealInterval:
    """Bracketing interval for the fundamental from the two length limits."""
    return RealInterval(quarter_wave_frequency(resonator, use_extension=True),
                        quarter_wave_frequency(resonator, use_extension=False))
