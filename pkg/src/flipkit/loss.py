"""Dielectric loss budgets and relaxation-time ceilings.

A mode with quality factor Q at frequency f cannot live longer than
T1 = Q / (2 pi f); dielectric participation converts material loss
tangents into both a capacitive decay rate and a degraded total Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .tables import SweepTable

__all__ = [
    "LossBudget",
    "t1_upper_bound",
    "dielectric_decay_rate",
    "q_with_dielectric",
    "t1_vs_loss_tangent",
    "gamma_linearity_check",
]


@dataclass(frozen=True)
class LossBudget:
    """Participation-weighted dielectric loss around one mode.

    regions maps region name -> (participation, loss tangent); the
    participations must each lie in [0, 1] and sum to at most 1.
    baseline_q is the quality factor with every loss tangent set to
    zero; eta is the mode weighting, close to 1 for a transmon.
    """

    mode_frequency: float
    baseline_q: float
    regions: dict[str, tuple[float, float]] = field(default_factory=dict)
    eta: float = 1.0

    def __post_init__(self):
        if self.mode_frequency <= 0.0:
            raise ValueError("mode frequency must be positive")
        if self.baseline_q <= 0.0:
            raise ValueError("baseline Q must be positive")
        if self.eta <= 0.0:
            raise ValueError("eta must be positive")
        total_p = 0.0
        for name, (p, tan_d) in self.regions.items():
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"participation of {name!r} outside [0, 1]")
            if tan_d < 0.0:
                raise ValueError(f"loss tangent of {name!r} must be >= 0")
            total_p += p
        if total_p > 1.0 + 1e-9:
            raise ValueError("participations sum past 1")

    def weighted_loss(self) -> float:
        return sum(p * tan_d for p, tan_d in self.regions.values())

    def with_tan_delta(self, tan_delta: float) -> "LossBudget":
        """Same budget with every region's loss tangent replaced."""
        regions = {name: (p, float(tan_delta))
                   for name, (p, _) in self.regions.items()}
        return replace(self, regions=regions)


def t1_upper_bound(q: float, frequency: float) -> float:
    """Ceiling T1 = Q / (2 pi f) in seconds."""
    if q <= 0.0 or frequency <= 0.0:
        raise ValueError("Q and frequency must be positive")
    return q / (2.0 * math.pi * frequency)


def dielectric_decay_rate(budget: LossBudget) -> float:
    """Capacitive decay rate eta * omega * sum_i p_i tan(delta_i), 1/s."""
    omega = 2.0 * math.pi * budget.mode_frequency
    return budget.eta * omega * budget.weighted_loss()


def q_with_dielectric(budget: LossBudget) -> float:
    """Total Q from 1/Q = 1/Q_baseline + sum_i p_i tan(delta_i)."""
    return 1.0 / (1.0 / budget.baseline_q + budget.weighted_loss())


def t1_vs_loss_tangent(budget: LossBudget, tan_deltas) -> SweepTable:
    """Loss-tangent sweep: every region takes the grid tangent in turn.

    One row per requested tangent with columns q_total, t1_upper_s and
    gamma_cap_per_s.  On a log-log plot the q_total column rolls off
    with slope -1 once the dielectric term dominates the baseline.
    """
    table = SweepTable(param_name="tan_delta")
    for tan_d in tan_deltas:
        b = budget.with_tan_delta(float(tan_d))
        q_total = q_with_dielectric(b)
        table.add_row(float(tan_d),
                      q_total=q_total,
                      t1_upper_s=t1_upper_bound(q_total, b.mode_frequency),
                      gamma_cap_per_s=dielectric_decay_rate(b))
    return table


def gamma_linearity_check(budget: LossBudget, tan_deltas,
                          participation_of=None) -> float:
    """Worst relative deviation of the decay rate from m * tan_delta.

    Evaluates the decay-rate formula over the grid, least-squares fits
    a line through the origin and returns max |residual| / max |rate|.
    The arithmetic runs on exact rationals, so a budget whose
    participations do not move with the tangent comes back as exactly
    0.0; any nonzero return measures real model nonlinearity.
    participation_of maps region name -> callable(tan_delta) -> p for
    studying tangent-dependent participation.
    """
    grid = [float(t) for t in tan_deltas]
    if not grid:
        raise ValueError("empty loss-tangent grid")
    if any(t < 0.0 or t > 0.1 for t in grid):
        raise ValueError("loss tangents must lie in [0, 0.1]")
    scale = Fraction(budget.eta) * Fraction(2.0 * math.pi) * Fraction(
        budget.mode_frequency)

    def rate(t: float) -> Fraction:
        total = Fraction(0)
        for name, (p, _) in budget.regions.items():
            if participation_of and name in participation_of:
                p = float(participation_of[name](t))
                if not 0.0 <= p <= 1.0:
                    raise ValueError(
                        f"participation of {name!r} left [0, 1] at {t}")
            total += Fraction(p) * Fraction(t)
        return scale * total

    ts = [Fraction(t) for t in grid]
    gammas = [rate(t) for t in grid]
    denom = sum(t * t for t in ts)
    if denom == 0:
        raise ValueError("grid needs a nonzero tangent to fit a slope")
    slope = sum(g * t for g, t in zip(gammas, ts)) / denom
    top = max(abs(g) for g in gammas)
    if top == 0:
        return 0.0
    worst = max(abs(g - slope * t) for g, t in zip(gammas, ts))
    return float(worst / top)
