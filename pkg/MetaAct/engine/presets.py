"""Experiment protocols as batches of scenarios plus a post-hoc summary.

Each preset takes a resolved config tree, returns the runs it needs and a
`summarize(runs, results)` callable that turns the stored series into one
summary table.
"""
import copy
from typing import NamedTuple

import numpy as np
import pandas as pd

from ..control import LOOPS
from ..utils.exceptions import ConfigError
from . import observables as obs
from .scenario import ScenarioConfig, build_scenario

BOPP_THICKNESSES_UM = (25, 38, 51)
SWEEP_POWERS = (0.0, 0.15, 0.3, 0.45, 0.6, 0.75)
AMBIENT_RISES = tuple(float(v) for v in range(0, 21, 2))
RETURN_POWERS = (0.0, 0.25, 0.5, 0.75)
DRIVE_POWER = 0.75
T_SAT = 300.0


class PresetRun(NamedTuple):
    name: str
    config: ScenarioConfig
    tags: dict


def _variant(cfg, name, **sections):
    new = copy.deepcopy(cfg)
    for section, values in sections.items():
        new[section].update(values)
    new.run.name = name
    return new


def _run(cfg, name, tags, **sections):
    return PresetRun(name, build_scenario(_variant(cfg, name, **sections)), tags)


_NO_RETURN = {'return': dict(enabled=False)}


def _step(loop, power, t_on):
    return dict(kind='step', loop=loop, power=power, t_on=t_on)


def _last(series):
    return series[-1]


# ---------------------------------------------------------------- power_sweep
def power_sweep(cfg):
    runs = []
    for bopp in BOPP_THICKNESSES_UM:
        # the sweep owns the cover thickness
        materials = copy.deepcopy(cfg.materials)
        materials[cfg.actuator.cover].thickness_um = float(bopp)
        for loop in LOOPS:
            for power in SWEEP_POWERS:
                name = 'bopp%d_%s_%.2fW' % (bopp, loop, power)
                runs.append(_run(cfg, name, dict(bopp_um=bopp, loop=loop, power_W=power),
                                 actuator=dict(kind='meta', bopp_thickness_um=None), materials=materials,
                                 schedule=_step(loop, power, T_SAT),
                                 run=dict(mode='steady', duration=T_SAT), **_NO_RETURN))

    def summarize(runs, results):
        rows = []
        for run, series in zip(runs, results):
            rec = _last(series)
            rows.append(dict(run=run.name, **run.tags,
                             dT_K=rec.dT_outer_K if run.tags['loop'] == 'outer' else rec.dT_inner_K,
                             ref_disp_mm=rec.ref_disp_mm, tip_disp_mm=rec.tip_disp_mm,
                             kappa_fit_per_cm=rec.kappa_fit_per_cm))
        table = pd.DataFrame(rows)
        table['linear_r2'] = table.groupby(['bopp_um', 'loop'])['ref_disp_mm'].transform(
            lambda d: obs.linear_r2(table.loc[d.index, 'power_W'], d.abs()))
        return table

    return runs, summarize


# -------------------------------------------------------------- step_response
def step_response(cfg, t_on=600.0, t_off=600.0):
    runs = [_run(cfg, 'step_%s' % loop, dict(loop=loop),
                 schedule=_step(loop, DRIVE_POWER, t_on),
                 run=dict(mode='transient', duration=t_on + t_off), **_NO_RETURN)
            for loop in LOOPS]

    def summarize(runs, results):
        rows = []
        for run, series in zip(runs, results):
            loop = run.tags['loop']
            dT_key = 'dT_%s_K' % loop
            rows.append(dict(
                run=run.name, loop=loop,
                sat_ref_disp_mm=obs.saturation_value(series, T_SAT),
                peak_ref_disp_mm=obs.value_at(series, t_on),
                sat_dT_K=obs.value_at(series, T_SAT, dT_key),
                rise_time_s=obs.rise_time(series, 0.9, T_SAT),
                norm_disp_off_30s=obs.value_at(series, t_on + 30.0) / obs.saturation_value(series, T_SAT),
                decay_t10_s=obs.time_to_fraction(series, 0.1, t_on),
            ))
        return pd.DataFrame(rows)

    return runs, summarize


# --------------------------------------------------------------------- cyclic
def cyclic(cfg, t_on=60.0, t_off=60.0, cycles=6):
    schedule = dict(kind='cyclic', power=DRIVE_POWER, t_on=t_on, t_off=t_off, cycles=cycles)
    runs = [_run(cfg, 'cyclic_%s' % loop, dict(loop=loop),
                 schedule=dict(schedule, loop=loop),
                 run=dict(mode='transient', duration=cycles * (t_on + t_off)), **_NO_RETURN)
            for loop in LOOPS]

    def summarize(runs, results):
        rows = []
        for run, series in zip(runs, results):
            p2p = obs.cycle_peak_to_peak(series, t_on + t_off, cycles)
            for c, value in enumerate(p2p):
                change = abs(value - p2p[c - 1]) / abs(p2p[c - 1]) if c > 0 and p2p[c - 1] != 0 else np.nan
                rows.append(dict(run=run.name, loop=run.tags['loop'], cycle=c + 1,
                                 peak_to_peak_mm=value, change_vs_previous=change))
        return pd.DataFrame(rows)

    return runs, summarize


# -------------------------------------------------------------- ambient_sweep
def ambient_sweep(cfg, rises=AMBIENT_RISES):
    T_ref = float(cfg.mechanics.T_ref)
    runs = []
    for rise in rises:
        T_amb = T_ref + rise
        for kind in ('meta', 'conventional'):
            runs.append(_run(cfg, '%s_rest_%02dK' % (kind, rise),
                             dict(device=kind, loop='none', dT_amb_K=rise),
                             actuator=dict(kind=kind), schedule=dict(kind='none'),
                             run=dict(mode='steady', duration=T_SAT, T_amb=T_amb), **_NO_RETURN))
        for loop in LOOPS:
            runs.append(_run(cfg, 'meta_%s_%02dK' % (loop, rise),
                             dict(device='meta', loop=loop, dT_amb_K=rise),
                             actuator=dict(kind='meta'), schedule=_step(loop, DRIVE_POWER, T_SAT),
                             run=dict(mode='transient', duration=T_SAT, T_amb=T_amb), **_NO_RETURN))

    def summarize(runs, results):
        rows = []
        for run, series in zip(runs, results):
            rec = _last(series)
            rows.append(dict(run=run.name, **run.tags, T_amb_C=T_ref + run.tags['dT_amb_K'],
                             kappa_fit_per_cm=rec.kappa_fit_per_cm, ref_disp_mm=rec.ref_disp_mm,
                             tip_disp_mm=rec.tip_disp_mm))
        table = pd.DataFrame(rows)
        table['c_fit_per_cm_K'] = np.nan
        for device in ('meta', 'conventional'):
            rest = table[(table.device == device) & (table.loop == 'none')]
            if len(rest):
                # reported positive for curling away from the top (cover) face
                c = -obs.sensitivity_fit(rest[['dT_amb_K', 'kappa_fit_per_cm']].to_numpy())
                table.loc[rest.index, 'c_fit_per_cm_K'] = c
        return table

    return runs, summarize


# -------------------------------------------------------------- forced_return
def forced_return(cfg, powers=RETURN_POWERS, t_act=T_SAT, t_after=600.0):
    runs = []
    for drive in LOOPS:
        for power in powers:
            name = 'drive_%s_return_%.2fW' % (drive, power)
            runs.append(_run(cfg, name, dict(drive_loop=drive, return_power_W=power),
                             schedule=dict(kind='none'),
                             run=dict(mode='transient', duration=t_act + t_after),
                             **{'return': dict(enabled=True, drive_loop=drive, drive_power=DRIVE_POWER,
                                               return_power=power, t_act=t_act)}))

    def summarize(runs, results):
        rows = []
        for run, series in zip(runs, results):
            norm = obs.normalize_displacement(series, t_act)
            t = np.array([r.t_s for r in series])
            rows.append(dict(
                run=run.name, **run.tags,
                sat_ref_disp_mm=obs.saturation_value(series, t_act),
                t10_s=obs.time_to_fraction(series, 0.1, t_act),
                norm_disp_30s=float(np.interp(t_act + 30.0, t, norm)),
            ))
        return pd.DataFrame(rows)

    return runs, summarize


# ---------------------------------------------------------------- alternating
def alternating(cfg, t_outer=50.0, t_inner=30.0, cycles=5):
    duration = cycles * (t_outer + t_inner)
    runs = [_run(cfg, 'alternating', dict(),
                 schedule=dict(kind='alternating', power=DRIVE_POWER, t_outer=t_outer, t_inner=t_inner,
                               cycles=cycles, t_rest=0.0),
                 run=dict(mode='transient', duration=duration), **_NO_RETURN)]

    def summarize(runs, results):
        series = results[0]
        rows = []
        for segment in runs[0].config.schedule.segments:
            loop = 'outer' if segment.P_outer > 0 else 'inner'
            rows.append(dict(run=runs[0].name, loop=loop, t_start_s=segment.t_start, t_end_s=segment.t_end,
                             ref_disp_mm=obs.value_at(series, segment.t_end),
                             dT_outer_K=obs.value_at(series, segment.t_end, 'dT_outer_K'),
                             dT_inner_K=obs.value_at(series, segment.t_end, 'dT_inner_K')))
        return pd.DataFrame(rows)

    return runs, summarize


__all__ = {
    'power_sweep': power_sweep,
    'step_response': step_response,
    'cyclic': cyclic,
    'ambient_sweep': ambient_sweep,
    'forced_return': forced_return,
    'alternating': alternating,
}


def preset(name, cfg):
    """(runs, summarize) of a named protocol built over the config tree `cfg`."""
    if name not in __all__:
        raise ConfigError('unknown preset %r, expected one of %s' % (name, ', '.join(__all__)), key='preset')
    return __all__[name](cfg)
