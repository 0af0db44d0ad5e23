"""Two-phase sampling schedule.

Every sampling period T_s = 1/f_s is split into an acquisition interval
T_aq = alpha * T_s followed by an energy-harvesting interval T_EH = T_s - T_aq.
Phase boundaries are always computed directly from the period index (never by
accumulating durations) so long runs cannot drift.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Phase(enum.IntEnum):
    ACQUISITION = 0
    ENERGY_HARVEST = 1


# Short labels used in trace CSV output.
PHASE_LABELS = {Phase.ACQUISITION: "acq", Phase.ENERGY_HARVEST: "eh"}


@dataclass(frozen=True)
class ClockPlan:
    """Sampling clock description.

    Attributes:
        f_s: sampling rate in Hz.
        alpha: acquisition fraction of the period, 0 < alpha < 1.
        n_periods: number of sampling periods in the run.
    """

    f_s: float
    alpha: float
    n_periods: int

    def __post_init__(self):
        if not (self.f_s > 0.0):
            raise ValueError(f"f_s must be positive, got {self.f_s}")
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.n_periods < 1:
            raise ValueError(f"n_periods must be >= 1, got {self.n_periods}")

    @property
    def t_s(self) -> float:
        """Sampling period in seconds."""
        return 1.0 / self.f_s

    @property
    def t_aq(self) -> float:
        """Acquisition interval per period."""
        return self.alpha * self.t_s

    @property
    def t_eh(self) -> float:
        """Energy-harvesting interval per period; t_aq + t_eh == t_s."""
        return self.t_s - self.t_aq


@dataclass(frozen=True)
class PhaseSegment:
    """Half-open interval [t_start, t_end) assigned to one phase of one period."""

    t_start: float
    t_end: float
    kind: Phase
    period_index: int

    def __post_init__(self):
        if not (self.t_start < self.t_end):
            raise ValueError(f"empty segment [{self.t_start}, {self.t_end})")


def segments(plan: ClockPlan) -> list[PhaseSegment]:
    """All 2*n_periods phase segments of a plan, in time order.

    Period k contributes Acquisition [k*T_s, k*T_s + alpha*T_s) followed by
    EnergyHarvest [k*T_s + alpha*T_s, (k+1)*T_s). Segments tile
    [0, n_periods*T_s) with no gaps or overlaps.
    """
    t_s = plan.t_s
    out = []
    for k in range(plan.n_periods):
        start = k * t_s
        boundary = k * t_s + plan.alpha * t_s
        end = (k + 1) * t_s
        out.append(PhaseSegment(start, boundary, Phase.ACQUISITION, k))
        out.append(PhaseSegment(boundary, end, Phase.ENERGY_HARVEST, k))
    return out


def phase_at(plan: ClockPlan, t: float) -> PhaseSegment:
    """The segment containing time t; boundaries belong to the segment they start.

    Raises:
        ValueError: if t is outside [0, n_periods*T_s).
    """
    t_s = plan.t_s
    if t < 0.0 or t >= plan.n_periods * t_s:
        raise ValueError(f"t={t} outside the planned run [0, {plan.n_periods * t_s})")
    k = int(t / t_s)
    # Rounding in t/t_s can misplace t by one period near a boundary; fix up
    # against the exact boundary expressions used everywhere else.
    if k + 1 < plan.n_periods and t >= (k + 1) * t_s:
        k += 1
    elif k > 0 and t < k * t_s:
        k -= 1
    k = min(k, plan.n_periods - 1)
    boundary = k * t_s + plan.alpha * t_s
    if t < boundary:
        return PhaseSegment(k * t_s, boundary, Phase.ACQUISITION, k)
    return PhaseSegment(boundary, (k + 1) * t_s, Phase.ENERGY_HARVEST, k)
