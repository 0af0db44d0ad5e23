"""Transient simulation engine.

Walks the two-phase schedule period by period: during acquisition the DAC
capacitance settles toward the input through the sampling switch; at the
phase boundary the settled voltage is converted and the DAC holds the
reconstructed level; during harvesting the storage capacitor charges from
the rectified input while the DAC node is untouched. Each phase is divided
into n_sub sub-steps integrated with the exact RC update, so the only
discretization left is the piecewise-linear approximation of the sine drive.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import sar_adc
from .clocking import ClockPlan, Phase
from .errors import CutoffError, NotConverged, ValidationError
from .frontend import Switch, SwitchKind, default_settling_factor, r_on, rc_step_value, required_r_on
from .harvester import EhConfig, EhMetrics, rectified_envelope, steady_state_metrics
from .sar_adc import AdcConfig, c_dac, dac_output, sar_convert
from .spectral import Spectrum, enob, sndr, spectrum
from .stimulus import InputPowerSpec, SineSource, rms_power

# Allowed relative slack when checking the settling budget, so a switch
# resistance solved exactly from the budget is not rejected by round-off.
_FEASIBILITY_SLACK = 1e-9

SWEEPABLE_PARAMETERS = ("alpha", "c_eh", "v_drop", "r_on_s1", "n_bits", "f_s")


@dataclass(frozen=True)
class Scenario:
    """Complete description of one simulation run.

    Attributes:
        source: stimulus (SineSource or TableSource).
        clock: two-phase sampling schedule.
        adc: converter configuration (including the S1 switch model).
        eh: harvesting branch configuration.
        p_in: optional input-power override; computed from the source when None.
        n_sub: sub-steps per phase segment.
        n_fft: record length for spectral metrics.
        settling_factor_k: acquisition settling factor; None selects
            (n_bits + 1)*ln 2, the half-LSB budget.
        max_periods: guard against runaway run lengths.
        steady_tol: steady-state fraction for harvesting metrics.
        seed: reserved for randomized test harnesses; unused by run().
    """

    source: object
    clock: ClockPlan
    adc: AdcConfig
    eh: EhConfig
    p_in: InputPowerSpec | None = None
    n_sub: int = 64
    n_fft: int = 4096
    settling_factor_k: float | None = None
    max_periods: int = 1_048_576
    steady_tol: float = 0.01
    seed: int = 0


@dataclass(frozen=True)
class TransientTrace:
    """Recorded waveforms and codes of one run.

    Per sub-step arrays (one row per sub-step end, 2*n_sub rows per period):
    t, v_in, phase (Phase enum values), v_dac, v_ceh, period. Per-period
    arrays: codes, v_sampled, saturated. period_s is the sampling period.
    """

    t: np.ndarray
    v_in: np.ndarray
    phase: np.ndarray
    v_dac: np.ndarray
    v_ceh: np.ndarray
    period: np.ndarray
    codes: np.ndarray
    v_sampled: np.ndarray
    saturated: np.ndarray
    period_s: float
    n_sub: int


@dataclass(frozen=True)
class SimulationResult:
    """Trace plus the metrics computed from it.

    Spectral and harvesting metrics are None when not requested. When both
    are present, enob == (sndr_db - 1.76)/6.02 by construction.
    """

    trace: TransientTrace
    sndr_db: float | None
    enob: float | None
    spectrum: Spectrum | None
    eh: EhMetrics | None
    s1_resolved: Switch


@dataclass(frozen=True)
class SweepRow:
    """One point of a parameter sweep; exactly one of result/error is set."""

    parameter: str
    value: float
    result: SimulationResult | None
    error: str | None


def _source_extremes(source) -> tuple[float, float]:
    if isinstance(source, SineSource):
        lo = source.dc_offset - source.amplitude
        hi = source.dc_offset + source.amplitude
        return lo, hi
    return float(np.min(source.volts)), float(np.max(source.volts))


def resolve_s1(scenario: Scenario) -> Switch:
    """The sampling-switch model actually used by the run.

    "auto" solves a constant on-resistance from the settling budget
    r = t_aq/(k*c_dac) for the scenario's own acquisition window, so the
    residual settling error stays below half an LSB at any alpha.
    """
    s1 = scenario.adc.s1
    if isinstance(s1, str):  # "auto", enforced by AdcConfig validation
        k = scenario.settling_factor_k
        if k is None:
            k = default_settling_factor(scenario.adc.n_bits)
        return Switch.constant(required_r_on(scenario.clock.t_aq, c_dac(scenario.adc), k))
    return s1


def validate(scenario: Scenario) -> Switch:
    """Check cross-parameter constraints; returns the resolved S1 switch.

    Raises:
        ValidationError: Nyquist violation, run length over max_periods,
            nonpositive n_sub, or an S1 that cannot settle the DAC
            capacitance within the acquisition window.
    """
    if scenario.n_sub < 1:
        raise ValidationError(f"n_sub must be >= 1, got {scenario.n_sub}")
    if scenario.clock.n_periods > scenario.max_periods:
        raise ValidationError(
            f"n_periods {scenario.clock.n_periods} exceeds max_periods {scenario.max_periods}"
        )
    if isinstance(scenario.source, SineSource):
        if not (scenario.source.frequency < scenario.clock.f_s / 2.0):
            raise ValidationError(
                f"stimulus at {scenario.source.frequency} Hz violates Nyquist for "
                f"f_s = {scenario.clock.f_s} Hz"
            )

    s1 = resolve_s1(scenario)
    k = scenario.settling_factor_k
    if k is None:
        k = default_settling_factor(scenario.adc.n_bits)
    # Worst-case on-resistance over the input range; a pass transistor is
    # weakest where its overdrive is smallest.
    lo, hi = _source_extremes(scenario.source)
    try:
        r_worst = max(r_on(s1, lo), r_on(s1, hi))
    except CutoffError as exc:
        raise ValidationError(f"S1 never conducts over the input range: {exc}") from exc
    budget = scenario.clock.t_aq * (1.0 + _FEASIBILITY_SLACK)
    if r_worst * c_dac(scenario.adc) * k > budget:
        raise ValidationError(
            f"S1 r_on {r_worst:.6g} ohm cannot settle c_dac {c_dac(scenario.adc):.6g} F "
            f"within t_aq {scenario.clock.t_aq:.6g} s at settling factor {k:.4g}"
        )
    return s1


def _signal_bin(scenario: Scenario) -> int:
    """Stimulus bin index for the FFT record; rejects non-coherent setups."""
    if not isinstance(scenario.source, SineSource):
        raise ValidationError("spectral metrics need a sine stimulus")
    m_exact = scenario.source.frequency * scenario.n_fft / scenario.clock.f_s
    m = round(m_exact)
    if abs(m_exact - m) > 1e-6:
        raise ValidationError(
            f"stimulus is not coherent: {m_exact} cycles per {scenario.n_fft}-point record"
        )
    if not (0 < m < scenario.n_fft // 2):
        raise ValidationError(f"signal bin {m} outside (0, n_fft/2)")
    return int(m)


def run(scenario: Scenario, spectral: bool = True, eh: bool = True) -> SimulationResult:
    """Simulate one scenario and compute the requested metrics.

    Args:
        scenario: validated inputs (validate() is called internally).
        spectral: compute SNDR/ENOB from the last n_fft codes; requires a
            coherent sine record of at least n_fft periods.
        eh: compute steady-state harvesting metrics from the trace.

    Raises:
        ValidationError: invalid scenario, or spectral metrics requested for
            a run shorter than n_fft periods / a non-coherent stimulus.
        NotConverged: harvesting metrics requested before steady state.
    """
    s1 = validate(scenario)
    sig_bin = _signal_bin(scenario) if spectral else 0
    if spectral and scenario.clock.n_periods < scenario.n_fft:
        raise ValidationError(
            f"spectral metrics need n_periods >= n_fft "
            f"({scenario.clock.n_periods} < {scenario.n_fft})"
        )

    plan = scenario.clock
    adc = scenario.adc
    ehc = scenario.eh
    nper = plan.n_periods
    nsub = scenario.n_sub
    t_s = plan.t_s
    alpha = plan.alpha

    # --- time grid ------------------------------------------------------
    # Boundaries come straight from the period index; the interior sub-step
    # endpoints are start + j*dt with the final endpoint snapped to the exact
    # boundary expression so both phases share identical grid times.
    k_idx = np.arange(nper, dtype=float)
    starts = k_idx * t_s
    boundaries = k_idx * t_s + alpha * t_s
    ends = (k_idx + 1.0) * t_s

    j_idx = np.arange(nsub + 1, dtype=float)
    dt_aq = plan.t_aq / nsub
    dt_eh = plan.t_eh / nsub
    t_aq_grid = starts[:, None] + j_idx[None, :] * dt_aq
    t_aq_grid[:, -1] = boundaries
    t_eh_grid = boundaries[:, None] + j_idx[None, :] * dt_eh
    t_eh_grid[:, -1] = ends

    v_aq = scenario.source.sample_at(t_aq_grid)
    v_eh_in = scenario.source.sample_at(t_eh_grid)
    env = rectified_envelope(v_eh_in, ehc.rectifier)

    # Last sub-step of each phase absorbs the snap, so its width can differ
    # from the nominal dt by round-off; precompute its exponential factor.
    dt_aq_last = t_aq_grid[:, -1] - t_aq_grid[:, -2]
    dt_eh_last = t_eh_grid[:, -1] - t_eh_grid[:, -2]

    s1_const = s1.kind is not SwitchKind.PASS_TRANSISTOR
    s2_const = ehc.s2.kind is not SwitchKind.PASS_TRANSISTOR
    r1 = r_on(s1, 0.0) if s1_const else 0.0
    c_load = c_dac(adc)
    r2_tot = (ehc.rectifier.r_series + r_on(ehc.s2, 0.0)) if s2_const else 0.0

    # Hot loop works on plain Python floats; ndarray scalar access is slow.
    v_aq_rows = v_aq.tolist()
    env_rows = env.tolist()
    dt_aq_last_l = dt_aq_last.tolist()
    dt_eh_last_l = dt_eh_last.tolist()

    v_ref = adc.v_ref
    v_dac = 0.0
    v_ceh = 0.0
    v_dac_rec: list[float] = []
    v_ceh_rec: list[float] = []
    codes: list[int] = []
    sampled: list[float] = []
    saturated: list[bool] = []

    for p in range(nper):
        row = v_aq_rows[p]
        if s1_const:
            tau1 = r1 * c_load
            a_main = math.exp(-dt_aq / tau1)
            a_last = math.exp(-dt_aq_last_l[p] / tau1)
            for j in range(nsub):
                u0 = row[j]
                u1 = row[j + 1]
                dt = dt_aq if j < nsub - 1 else dt_aq_last_l[p]
                a = a_main if j < nsub - 1 else a_last
                stau = (u1 - u0) * (tau1 / dt)
                v_dac = u1 - stau + (v_dac - u0 + stau) * a
                v_dac_rec.append(v_dac)
                v_ceh_rec.append(v_ceh)
        else:
            for j in range(nsub):
                u0 = row[j]
                u1 = row[j + 1]
                dt = dt_aq if j < nsub - 1 else dt_aq_last_l[p]
                try:
                    r_j = r_on(s1, u0)
                except CutoffError:
                    r_j = None  # switch open: DAC node floats at its voltage
                if r_j is not None:
                    v_dac = rc_step_value(v_dac, u0, u1, r_j, c_load, dt)
                v_dac_rec.append(v_dac)
                v_ceh_rec.append(v_ceh)

        v_smp = v_dac
        code = sar_convert(v_smp, adc)
        codes.append(code)
        sampled.append(v_smp)
        saturated.append(v_smp < -v_ref or v_smp >= v_ref)
        v_dac = dac_output(code, adc)  # DAC holds the reconstructed level

        row_e = env_rows[p]
        if s2_const:
            tau2 = r2_tot * ehc.c_eh
            a_main = math.exp(-dt_eh / tau2)
            a_last = math.exp(-dt_eh_last_l[p] / tau2)
            for j in range(nsub):
                e0 = row_e[j]
                e1 = row_e[j + 1]
                dt = dt_eh if j < nsub - 1 else dt_eh_last_l[p]
                a = a_main if j < nsub - 1 else a_last
                stau = (e1 - e0) * (tau2 / dt)
                cand = e1 - stau + (v_ceh - e0 + stau) * a
                if cand > v_ceh:  # diode blocking: voltage only ratchets up
                    v_ceh = cand
                v_dac_rec.append(v_dac)
                v_ceh_rec.append(v_ceh)
        else:
            for j in range(nsub):
                e0 = row_e[j]
                e1 = row_e[j + 1]
                dt = dt_eh if j < nsub - 1 else dt_eh_last_l[p]
                try:
                    r_j = ehc.rectifier.r_series + r_on(ehc.s2, e0)
                except CutoffError:
                    r_j = None
                if r_j is not None:
                    cand = rc_step_value(v_ceh, e0, e1, r_j, ehc.c_eh, dt)
                    if cand > v_ceh:
                        v_ceh = cand
                v_dac_rec.append(v_dac)
                v_ceh_rec.append(v_ceh)

    # --- assemble the trace ----------------------------------------------
    t_rows = np.hstack([t_aq_grid[:, 1:], t_eh_grid[:, 1:]]).ravel()
    v_in_rows = np.hstack([v_aq[:, 1:], v_eh_in[:, 1:]]).ravel()
    phase_rows = np.tile(
        np.repeat(
            np.array([Phase.ACQUISITION, Phase.ENERGY_HARVEST], dtype=np.uint8), nsub
        ),
        nper,
    )
    period_rows = np.repeat(np.arange(nper, dtype=np.int64), 2 * nsub)

    trace = TransientTrace(
        t=t_rows,
        v_in=v_in_rows,
        phase=phase_rows,
        v_dac=np.asarray(v_dac_rec),
        v_ceh=np.asarray(v_ceh_rec),
        period=period_rows,
        codes=np.asarray(codes, dtype=np.int64),
        v_sampled=np.asarray(sampled),
        saturated=np.asarray(saturated, dtype=bool),
        period_s=t_s,
        n_sub=nsub,
    )

    sndr_db = None
    enob_bits = None
    spec = None
    if spectral:
        spec = spectrum(trace.codes[-scenario.n_fft:], adc, plan.f_s, sig_bin)
        sndr_db = sndr(spec)
        enob_bits = enob(sndr_db) if math.isfinite(sndr_db) else None

    metrics = None
    if eh:
        p_in = scenario.p_in
        if p_in is None:
            if not isinstance(scenario.source, SineSource):
                raise ValidationError(
                    "harvesting metrics need a configured input power for table sources"
                )
            p_in = rms_power(scenario.source)
        v_m = scenario.source.amplitude if isinstance(scenario.source, SineSource) else max(
            abs(x) for x in _source_extremes(scenario.source)
        )
        metrics = steady_state_metrics(trace, p_in, ehc, v_m, tol=scenario.steady_tol)

    return SimulationResult(
        trace=trace,
        sndr_db=sndr_db,
        enob=enob_bits,
        spectrum=spec,
        eh=metrics,
        s1_resolved=s1,
    )


def apply_parameter(base: Scenario, parameter: str, value: float) -> Scenario:
    """A copy of base with one sweepable parameter replaced.

    Raises:
        ValueError: unknown parameter name.
        ValidationError: the new value violates a constructor invariant.
    """
    try:
        if parameter == "alpha":
            return dataclasses.replace(base, clock=dataclasses.replace(base.clock, alpha=value))
        if parameter == "f_s":
            return dataclasses.replace(base, clock=dataclasses.replace(base.clock, f_s=value))
        if parameter == "c_eh":
            return dataclasses.replace(base, eh=dataclasses.replace(base.eh, c_eh=value))
        if parameter == "v_drop":
            rect = dataclasses.replace(base.eh.rectifier, v_drop=value)
            return dataclasses.replace(base, eh=dataclasses.replace(base.eh, rectifier=rect))
        if parameter == "r_on_s1":
            return dataclasses.replace(base, adc=dataclasses.replace(base.adc, s1=Switch.constant(value)))
        if parameter == "n_bits":
            return dataclasses.replace(base, adc=dataclasses.replace(base.adc, n_bits=int(value)))
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    raise ValueError(
        f"unknown sweep parameter {parameter!r}; choose from {', '.join(SWEEPABLE_PARAMETERS)}"
    )


def _sweep_worker(args) -> SweepRow:
    base, parameter, value, spectral, eh = args
    try:
        scenario = apply_parameter(base, parameter, value)
        result = run(scenario, spectral=spectral, eh=eh)
        return SweepRow(parameter, value, result, None)
    except (ValidationError, NotConverged) as exc:
        return SweepRow(parameter, value, None, str(exc))


def sweep(
    base: Scenario,
    parameter: str,
    values,
    jobs: int = 1,
    spectral: bool = True,
    eh: bool = True,
) -> list[SweepRow]:
    """Run one scenario per value of a single parameter.

    Per-row validation and convergence failures are recorded in the row's
    error field instead of aborting the sweep. Rows are returned in input
    order regardless of jobs.

    Raises:
        ValueError: unknown parameter name (checked before any run starts).
    """
    if parameter not in SWEEPABLE_PARAMETERS:
        raise ValueError(
            f"unknown sweep parameter {parameter!r}; choose from {', '.join(SWEEPABLE_PARAMETERS)}"
        )
    tasks = [(base, parameter, float(v), spectral, eh) for v in values]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_worker, tasks))
    return [_sweep_worker(task) for task in tasks]
