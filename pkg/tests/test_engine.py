import copy

import numpy as np
import pytest

from MetaAct.control import power_at
from MetaAct.engine import (PRESETS, TimeSeriesRecord, build_scenario, cycle_peak_to_peak, linear_r2,
                            normalize_displacement, preset, rise_time, run_scenario, run_steady, sensitivity_fit,
                            time_to_fraction, to_frame, value_at)
from MetaAct.mechanics import (CurvatureModel, mech_lag, reference_displacement, shape_from_curvature,
                               straight_shape)
from MetaAct.model import discretize
from MetaAct.thermal import ThermalSolver, ThermalState
from MetaAct.utils.exceptions import ConfigError, NumericalError


def _scenario(cfg, **sections):
    new = copy.deepcopy(cfg)
    for section, values in sections.items():
        new[section].update(values)
    return build_scenario(new)


def _series(t, d):
    return [TimeSeriesRecord(float(ti), 0.0, 0.0, float(di), float(di), 0.0, 0.0, 0.0) for ti, di in zip(t, d)]


def _step(loop='outer', power=0.75, t_on=600.0):
    return dict(kind='step', loop=loop, power=power, t_on=t_on)


def test_zero_power_stays_at_rest(coarse_cfg):
    records = run_scenario(_scenario(coarse_cfg, run=dict(duration=20.0)))
    assert len(records) == 21
    for rec in records:
        assert rec[1:] == (0.0,) * 7


def test_record_times_and_powers(coarse_cfg):
    records = run_scenario(_scenario(coarse_cfg, schedule=_step(t_on=5.0), run=dict(duration=10.0)))
    assert [r.t_s for r in records] == [float(k) for k in range(11)]
    assert records[0].P_outer_W == 0.0
    # each record carries the power of the step that just ended
    assert records[5].P_outer_W == 0.75
    assert records[6].P_outer_W == 0.0
    assert all(r.P_inner_W == 0.0 for r in records)


def test_runs_are_deterministic(coarse_cfg):
    scenario = _scenario(coarse_cfg, schedule=_step(t_on=20.0), run=dict(duration=40.0))
    assert run_scenario(scenario) == run_scenario(scenario)


def test_step_response_rises_then_relaxes(coarse_cfg):
    records = run_scenario(_scenario(coarse_cfg, schedule=_step(t_on=60.0), run=dict(duration=120.0)))
    d30, d60, d120 = (value_at(records, t) for t in (30.0, 60.0, 120.0))
    assert d60 < d30 < 0.0
    assert abs(d120) < abs(d60)
    assert value_at(records, 60.0, 'dT_outer_K') > value_at(records, 120.0, 'dT_outer_K') > 0.0


def test_loops_bend_opposite_ways(coarse_cfg):
    outer = run_scenario(_scenario(coarse_cfg, schedule=_step('outer', t_on=60.0), run=dict(duration=60.0)))
    inner = run_scenario(_scenario(coarse_cfg, schedule=_step('inner', t_on=60.0), run=dict(duration=60.0)))
    assert outer[-1].ref_disp_mm < 0.0 < inner[-1].ref_disp_mm
    assert outer[-1].tip_disp_mm < 0.0 < inner[-1].tip_disp_mm


def test_halving_dt_changes_little(coarse_cfg):
    values = []
    for dt in (0.5, 0.25):
        scenario = _scenario(coarse_cfg, thermal=dict(dt=dt), schedule=_step(t_on=600.0),
                             run=dict(duration=600.0, stride=int(round(60.0 / dt))))
        values.append(value_at(run_scenario(scenario), 600.0))
    assert values[1] == pytest.approx(values[0], rel=5e-3)


def test_steady_mode_matches_long_transient(coarse_cfg):
    long_run = _scenario(coarse_cfg, thermal=dict(dt=1.0), schedule=_step(t_on=1500.0),
                         run=dict(duration=1500.0, stride=100))
    steady = run_steady(long_run.replace(mode='steady'))
    assert len(steady) == 1 and steady[0].t_s == 1500.0
    last = run_scenario(long_run)[-1]
    assert steady[0].ref_disp_mm == pytest.approx(last.ref_disp_mm, rel=1e-4)
    assert steady[0].dT_outer_K == pytest.approx(last.dT_outer_K, rel=1e-4)


def test_forced_return_latches_off(coarse_cfg):
    scenario = _scenario(coarse_cfg, run=dict(duration=200.0),
                         **{'return': dict(enabled=True, drive_loop='outer', t_act=60.0, return_power=0.75)})
    records = run_scenario(scenario)
    before = [r for r in records if 0.0 < r.t_s <= 60.0]
    after = [r for r in records if r.t_s > 60.0]
    assert all(r.P_outer_W == 0.75 and r.P_inner_W == 0.0 for r in before)
    assert all(r.P_outer_W == 0.0 for r in after)
    assert after[0].P_inner_W == 0.75
    powered = [r.P_inner_W > 0.0 for r in after]
    if False in powered:
        assert not any(powered[powered.index(False):])


def test_invalid_run_settings(coarse_cfg):
    with pytest.raises(ConfigError):
        _scenario(coarse_cfg, run=dict(duration=0.0))
    with pytest.raises(ConfigError):
        _scenario(coarse_cfg, run=dict(mode='quasi'))


def test_to_frame_columns(coarse_cfg):
    frame = to_frame(run_scenario(_scenario(coarse_cfg, run=dict(duration=4.0))))
    assert list(frame.columns) == list(TimeSeriesRecord._fields)
    assert len(frame) == 5


def test_rise_and_decay_times():
    tau = 50.0
    t = np.arange(0.0, 901.0, 0.5)
    d = np.where(t <= 300.0, 1.0 - np.exp(-t / tau), (1.0 - np.exp(-300.0 / tau)) * np.exp(-(t - 300.0) / tau))
    series = _series(t, -d)
    expected = -tau * np.log(1.0 - 0.9 * (1.0 - np.exp(-300.0 / tau)))
    assert rise_time(series, 0.9, 300.0) == pytest.approx(expected, rel=1e-3)
    assert time_to_fraction(series, 0.1, 300.0) == pytest.approx(tau * np.log(10.0), rel=1e-3)
    assert time_to_fraction(series, 1e-9, 300.0) == np.inf


def test_value_at_outside_series():
    series = _series([0.0, 1.0, 2.0], [0.0, 1.0, 2.0])
    assert value_at(series, 1.5) == pytest.approx(1.5)
    with pytest.raises(NumericalError):
        value_at(series, 3.0)


def test_normalize_displacement():
    t = np.arange(0.0, 601.0, 10.0)
    d = np.minimum(t, 300.0) / 10.0
    norm = normalize_displacement(_series(t, d), 300.0)
    assert norm[t == 300.0][0] == 1.0
    scaled = normalize_displacement(_series(t, -7.5 * d), 300.0)
    assert np.allclose(norm, scaled)
    with pytest.raises(NumericalError):
        normalize_displacement(_series(t, 0.0 * d), 300.0)


def test_cycle_peak_to_peak():
    t = np.arange(0.0, 360.0 + 1e-9, 1.0)
    d = np.sin(2.0 * np.pi * t / 120.0)
    p2p = cycle_peak_to_peak(_series(t, d), 120.0, 3)
    assert np.allclose(p2p, 2.0, atol=1e-3)


def test_sensitivity_fit_synthetic():
    rises = np.arange(0.0, 21.0, 2.0)
    points = np.column_stack([rises, 0.047 * rises])
    assert sensitivity_fit(points) == pytest.approx(0.047)
    # points above the window are ignored
    points[rises > 10.0, 1] = 1.0
    assert sensitivity_fit(points) == pytest.approx(0.047)
    assert sensitivity_fit(np.column_stack([rises, 0.0 * rises])) == 0.0


def test_sensitivity_fit_needs_points():
    with pytest.raises(NumericalError):
        sensitivity_fit([(0.0, 0.0), (2.0, 0.1)])
    with pytest.raises(NumericalError):
        sensitivity_fit([(0.0, 0.0), (0.0, 0.1), (0.0, 0.2)])


def test_linear_r2():
    x = np.linspace(0.0, 0.75, 6)
    assert linear_r2(x, 3.0 * x + 1.0) == pytest.approx(1.0)
    assert linear_r2(x, x ** 2) < 1.0


def test_preset_registry(coarse_cfg):
    assert set(PRESETS) == {'power_sweep', 'step_response', 'cyclic', 'ambient_sweep', 'forced_return',
                            'alternating'}
    with pytest.raises(ConfigError):
        preset('fig9', coarse_cfg)


def test_preset_run_counts(coarse_cfg):
    assert len(preset('power_sweep', coarse_cfg)[0]) == 36
    assert len(preset('forced_return', coarse_cfg)[0]) == 8
    assert len(preset('step_response', coarse_cfg)[0]) == 2
    assert len(preset('cyclic', coarse_cfg)[0]) == 2
    assert len(preset('alternating', coarse_cfg)[0]) == 1
    runs, _ = preset('ambient_sweep', coarse_cfg)
    rest = [run for run in runs if run.tags['loop'] == 'none']
    assert sorted({run.tags['dT_amb_K'] for run in rest}) == [float(v) for v in range(0, 21, 2)]
    assert all(run.config.mode == 'steady' for run in rest)


def test_power_sweep_scales_with_power(coarse_cfg):
    runs, summarize = preset('power_sweep', coarse_cfg)
    table = summarize(runs, [run_scenario(run.config) for run in runs])
    assert len(table) == 36
    for (_, loop), group in table.groupby(['bopp_um', 'loop']):
        group = group.sort_values('power_W')
        disp = group['ref_disp_mm'].to_numpy()
        assert disp[0] == 0.0
        assert np.all(np.diff(np.abs(disp)) > 0.0)
        assert np.all(np.sign(disp[1:]) == (-1.0 if loop == 'outer' else 1.0))


def test_meta_rest_ignores_ambient(coarse_cfg):
    runs, summarize = preset('ambient_sweep', coarse_cfg)
    rest = [run for run in runs if run.tags['loop'] == 'none']
    table = summarize(rest, [run_scenario(run.config) for run in rest])
    c = table.groupby('device')['c_fit_per_cm_K'].first()
    assert c['conventional'] > 0.0
    assert abs(c['meta']) * 10.0 <= c['conventional']


def test_full_lag_matches_first_order_relaxation(coarse_cfg):
    scenario = _scenario(coarse_cfg, mechanics=dict(lag_fraction=1.0, tau_mech=40.0), schedule=_step(t_on=20.0),
                         run=dict(duration=40.0))
    records = run_scenario(scenario)

    act = discretize(scenario.spec)
    cm = CurvatureModel(act)
    solver = ThermalSolver(act, scenario.thermal)
    rest = straight_shape(scenario.spec.length, act.n_cells)
    dt = scenario.thermal.dt
    state = ThermalState.ambient(act, scenario.T_amb)
    kappa = cm.curvature(state.theta + scenario.dT_amb)
    expected = []
    for n in range(1, scenario.n_steps + 1):
        state = solver.step(state, *power_at(scenario.schedule, (n - 0.5) * dt))
        kappa = mech_lag(kappa, cm.curvature(state.theta + scenario.dT_amb), dt, 40.0)
        if n % scenario.stride == 0:
            shape = shape_from_curvature(kappa, scenario.spec.length, act.grid.x_edges, clamp=scenario.spec.clamp)
            expected.append(reference_displacement(shape, rest, signed=True))
    assert len(expected) == len(records) - 1
    assert [r.ref_disp_mm for r in records[1:]] == pytest.approx(expected, rel=1e-12, abs=1e-15)


def test_inner_loop_bends_further(coarse_cfg):
    sat = {}
    for loop in ('outer', 'inner'):
        records = run_scenario(_scenario(coarse_cfg, schedule=_step(loop, t_on=300.0), run=dict(duration=300.0)))
        sat[loop] = abs(value_at(records, 300.0))
    assert sat['inner'] > 1.1 * sat['outer']


def _rest_drift(cfg, kind, clamp_mm, rise=10.0):
    new = copy.deepcopy(cfg)
    new.actuator.update(dict(kind=kind, clamp_mm=clamp_mm))
    new.run.update(dict(mode='steady', T_amb=float(new.mechanics.T_ref) + rise))
    return run_steady(build_scenario(new))[-1].ref_disp_mm


def test_clamped_root_cuts_ambient_drift(coarse_cfg):
    meta = _rest_drift(coarse_cfg, 'meta', 7.7)
    conventional = _rest_drift(coarse_cfg, 'conventional', 7.7)
    assert abs(conventional) >= 10.0 * abs(meta)
    # a free root lets the unbalanced end rungs rotate the whole strip
    free = _rest_drift(coarse_cfg, 'meta', 0.0)
    assert abs(free) > 5.0 * abs(meta)


def test_sensitivity_fit_keeps_sign():
    rises = np.arange(0.0, 11.0, 2.0)
    assert sensitivity_fit(np.column_stack([rises, -0.047 * rises])) == pytest.approx(-0.047)
    rng = np.random.RandomState(5)
    noisy = np.column_stack([rises, 1e-3 * rng.standard_normal(len(rises))])
    expected = float(np.dot(rises, noisy[:, 1]) / np.dot(rises, rises))
    assert sensitivity_fit(noisy) == pytest.approx(expected)
