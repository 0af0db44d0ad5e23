"""Energy-harvesting branch: rectifier, storage-cap charging, and metrics.

During every harvesting interval the input drives a full-wave rectifier into
the storage capacitor C_EH. The rectifier is modeled behaviorally as a
dead-zone transfer (|v| minus a conduction drop, floored at zero) in series
with a conduction resistance; charge flows only into the capacitor, never
back out (diode blocking), so the stored voltage ratchets upward toward the
peak rectified amplitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CutoffError, NotConverged
from .frontend import RcState, Switch, r_on, rc_step_value
from .stimulus import InputPowerSpec


@dataclass(frozen=True)
class RectifierModel:
    """Aggregate conduction drop and series resistance of the rectifier path."""

    v_drop: float
    r_series: float

    def __post_init__(self):
        if self.v_drop < 0.0:
            raise ValueError(f"v_drop must be >= 0, got {self.v_drop}")
        if not (self.r_series > 0.0):
            raise ValueError(f"r_series must be positive, got {self.r_series}")


@dataclass(frozen=True)
class EhConfig:
    """Storage capacitor plus the conduction path charging it."""

    c_eh: float
    rectifier: RectifierModel
    s2: Switch

    def __post_init__(self):
        if not (self.c_eh > 0.0):
            raise ValueError(f"c_eh must be positive, got {self.c_eh}")


@dataclass(frozen=True)
class EhMetrics:
    """Steady-state harvesting figures for one run.

    Attributes:
        v_eh: final (steady-state) storage-cap voltage.
        t_ceh: time to first reach (1 - tol) of v_eh.
        eta_v: voltage efficiency v_eh / v_m.
        eta_e: energy efficiency, stored energy over input energy during t_ceh.
        e_h: stored energy 0.5 * c_eh * v_eh**2.
    """

    v_eh: float
    t_ceh: float
    eta_v: float
    eta_e: float
    e_h: float


def rectified_envelope(v_in, rect: RectifierModel):
    """Dead-zone full-wave transfer: max(|v_in| - v_drop, 0).

    Accepts scalars or ndarrays. Inside the dead zone |v_in| <= v_drop the
    rectifier does not conduct and the output is zero.
    """
    return np.maximum(np.abs(v_in) - rect.v_drop, 0.0)


def eh_step(
    state: RcState,
    v_in_start: float,
    v_in_end: float,
    cfg: EhConfig,
    dt: float,
) -> RcState:
    """Advance the storage-cap voltage across one harvesting sub-step.

    The drive is the rectified envelope of the input, linear between the
    sub-step endpoints; the branch resistance is r_series plus the S2 switch
    resistance. Blocking rule: the capacitor voltage never decreases. When
    the envelope sits below the stored voltage the RC solution would decay,
    so the state is held instead; when S2 is cut off the branch is open and
    the state is likewise held.
    """
    env0 = float(rectified_envelope(v_in_start, cfg.rectifier))
    env1 = float(rectified_envelope(v_in_end, cfg.rectifier))
    try:
        r_tot = cfg.rectifier.r_series + r_on(cfg.s2, env0)
    except CutoffError:
        return RcState(state.v_cap, state.t + dt)
    cand = rc_step_value(state.v_cap, env0, env1, r_tot, cfg.c_eh, dt)
    if cand > state.v_cap:
        return RcState(cand, state.t + dt)
    return RcState(state.v_cap, state.t + dt)


def steady_state_metrics(
    trace,
    p_in: InputPowerSpec,
    cfg: EhConfig,
    v_m: float,
    tol: float = 0.01,
) -> EhMetrics:
    """Harvesting metrics from a finished transient trace.

    Args:
        trace: object exposing ``t`` (seconds), ``v_ceh`` (volts), both
            aligned 1-D arrays, and ``period_s`` (sampling period).
        p_in: input power used for the energy-efficiency denominator.
        cfg: harvesting branch configuration (for c_eh).
        v_m: input peak amplitude, the reference for voltage efficiency.
        tol: steady-state fraction; v_eh is converged when the voltage moved
            less than tol*v_eh over the last 10 periods, and t_ceh is the
            first crossing of (1 - tol)*v_eh (linearly interpolated).

    Raises:
        NotConverged: trace shorter than 10 periods, still-moving final
            voltage, or no charge accumulated at all.
    """
    if not (v_m > 0.0):
        raise ValueError(f"v_m must be positive, got {v_m}")
    if not (0.0 < tol < 1.0):
        raise ValueError(f"tol must lie in (0, 1), got {tol}")
    t = np.asarray(trace.t, dtype=float)
    v = np.asarray(trace.v_ceh, dtype=float)
    if t.size < 2:
        raise NotConverged("trace too short for steady-state metrics")

    v_eh = float(v[-1])
    if v_eh <= 0.0:
        raise NotConverged("storage capacitor never charged above zero")

    window_start = t[-1] - 10.0 * trace.period_s
    if t[0] > window_start:
        raise NotConverged("trace spans fewer than 10 periods")
    first = int(np.searchsorted(t, window_start, side="left"))
    if abs(v_eh - float(v[first])) > tol * v_eh:
        raise NotConverged(
            f"storage voltage still moving: changed {abs(v_eh - float(v[first])):.3e} V "
            f"over the last 10 periods"
        )

    threshold = (1.0 - tol) * v_eh
    i = int(np.argmax(v >= threshold))
    if i == 0:
        t_ceh = float(t[0])
    else:
        t0, t1 = float(t[i - 1]), float(t[i])
        v0, v1 = float(v[i - 1]), float(v[i])
        t_ceh = t0 + (threshold - v0) * (t1 - t0) / (v1 - v0)

    if t_ceh <= 0.0:
        raise NotConverged(
            "storage voltage was already at its final value at the first "
            "recorded sample, so the charging time is not resolvable"
        )

    e_h = harvested_energy(v_eh, cfg.c_eh)
    eta_e = e_h / (p_in.p_in_rms * t_ceh)
    return EhMetrics(v_eh=v_eh, t_ceh=t_ceh, eta_v=v_eh / v_m, eta_e=eta_e, e_h=e_h)


def harvested_energy(v_eh: float, c_eh: float) -> float:
    """Energy stored on the capacitor: 0.5 * c_eh * v_eh**2."""
    if v_eh < 0.0 or c_eh < 0.0:
        raise ValueError("harvested_energy needs nonnegative inputs")
    return 0.5 * c_eh * v_eh * v_eh


def size_capacitor(i_load: float, t_p: float, delta_v: float) -> float:
    """Storage capacitance that holds ripple to delta_v under a DC load.

    A load drawing i_load between consecutive recharge instants t_p apart
    droops the capacitor by i_load*t_p/C, so C = i_load*t_p/delta_v.

    Raises:
        ValueError: nonpositive delta_v or t_p, or negative i_load.
    """
    if not (delta_v > 0.0):
        raise ValueError(f"delta_v must be positive, got {delta_v}")
    if not (t_p > 0.0):
        raise ValueError(f"t_p must be positive, got {t_p}")
    if i_load < 0.0:
        raise ValueError(f"i_load must be nonnegative, got {i_load}")
    return i_load * t_p / delta_v


def boost_charge_time(
    p_harvest_avg: float,
    eta_converter: float,
    c_load: float,
    v_load: float,
) -> float:
    """Time for a boost converter to charge c_load to v_load.

    Ideal energy balance: the load capacitor needs 0.5*c_load*v_load**2 of
    energy, delivered at eta_converter times the average harvested power, so
    t = 0.5*c_load*v_load**2 / (eta_converter * p_harvest_avg).
    """
    if not (p_harvest_avg > 0.0):
        raise ValueError(f"p_harvest_avg must be positive, got {p_harvest_avg}")
    if not (0.0 < eta_converter <= 1.0):
        raise ValueError(f"eta_converter must lie in (0, 1], got {eta_converter}")
    if not (c_load > 0.0 and v_load > 0.0):
        raise ValueError("c_load and v_load must be positive")
    return 0.5 * c_load * v_load * v_load / (eta_converter * p_harvest_avg)
